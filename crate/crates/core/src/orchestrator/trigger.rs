use std::time::{Duration, Instant};

use thiserror::Error;

use super::store::{ObjectStore, StoreError};

#[derive(Debug, Error)]
pub enum TriggerError {
    #[error("timed out after {waited:?} waiting for {expected} blobs under {prefix:?} (found {found})")]
    Timeout {
        prefix: String,
        expected: usize,
        found: usize,
        waited: Duration,
    },
    #[error("{found} blobs under {prefix:?}, expected exactly {expected}")]
    Overfull {
        prefix: String,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Store(#[from] StoreError),
}

pub const DEFAULT_POLL_INTERVAL: Duration = Duration::from_millis(50);

/// Waits for a stage's completion: the number of blobs under `prefix`
/// reaching `expected`. Consumed by [`PipelineTrigger::wait`], so it fires
/// at most once.
#[derive(Clone, Debug)]
pub struct PipelineTrigger {
    pub prefix: String,
    pub expected: usize,
    pub poll_interval: Duration,
    pub timeout: Duration,
}

impl PipelineTrigger {
    pub fn new(prefix: &str, expected: usize, timeout: Duration) -> Self {
        Self {
            prefix: prefix.to_string(),
            expected,
            poll_interval: DEFAULT_POLL_INTERVAL,
            timeout,
        }
    }

    /// Blocks until exactly `expected` keys exist under the prefix, and
    /// returns them.
    pub fn wait(self, store: &dyn ObjectStore) -> Result<Vec<String>, TriggerError> {
        let start = Instant::now();
        loop {
            let keys = store.list(&self.prefix)?;
            if keys.len() == self.expected {
                return Ok(keys);
            }
            if keys.len() > self.expected {
                return Err(TriggerError::Overfull {
                    prefix: self.prefix,
                    expected: self.expected,
                    found: keys.len(),
                });
            }
            let waited = start.elapsed();
            if waited >= self.timeout {
                return Err(TriggerError::Timeout {
                    prefix: self.prefix,
                    expected: self.expected,
                    found: keys.len(),
                    waited,
                });
            }
            std::thread::sleep(self.poll_interval.min(self.timeout - waited));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orchestrator::store::MemoryStore;

    #[test]
    fn fires_when_count_reached() {
        let store = MemoryStore::new();
        std::thread::scope(|s| {
            s.spawn(|| {
                for i in 0..3 {
                    std::thread::sleep(Duration::from_millis(20));
                    store.put_atomic(&format!("raw/node-{i}.json"), b"[]").unwrap();
                }
            });
            let keys = PipelineTrigger::new("raw/", 3, Duration::from_secs(10))
                .wait(&store)
                .unwrap();
            assert_eq!(keys.len(), 3);
        });
    }

    #[test]
    fn times_out() {
        let store = MemoryStore::new();
        store.put_atomic("raw/node-0.json", b"[]").unwrap();
        let mut t = PipelineTrigger::new("raw/", 2, Duration::from_millis(120));
        t.poll_interval = Duration::from_millis(10);
        match t.wait(&store) {
            Err(TriggerError::Timeout { found, expected, .. }) => assert_eq!((found, expected), (1, 2)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn overfull_is_an_error() {
        let store = MemoryStore::new();
        store.put_atomic("raw/a", b"").unwrap();
        store.put_atomic("raw/b", b"").unwrap();
        assert!(matches!(
            PipelineTrigger::new("raw/", 1, Duration::from_secs(1)).wait(&store),
            Err(TriggerError::Overfull { .. })
        ));
    }
}
