/// Round-robin assignment of a sorted list onto `n` workers: item `i` goes
/// to worker `i mod n`. Worker sizes differ by at most one.
pub fn schedule_static<T: Clone>(items: &[T], n: usize) -> Vec<Vec<T>> {
    assert!(n > 0, "at least one worker");
    let mut sets = vec![Vec::with_capacity(items.len() / n + 1); n];
    for (i, item) in items.iter().enumerate() {
        sets[i % n].push(item.clone());
    }
    sets
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn seven_over_three() {
        let s = schedule_static(&[0, 1, 2, 3, 4, 5, 6], 3);
        assert_eq!(s, vec![vec![0, 3, 6], vec![1, 4], vec![2, 5]]);
    }

    #[test]
    fn more_workers_than_items() {
        let s = schedule_static(&["a"], 3);
        assert_eq!(s.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 0, 0]);
    }

    proptest! {
        #[test]
        fn partition_and_balance(len in 0usize..300, n in 1usize..20) {
            let items: Vec<usize> = (0..len).collect();
            let sets = schedule_static(&items, n);
            prop_assert_eq!(sets.len(), n);
            let mut all: Vec<usize> = sets.iter().flatten().copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, items);
            let max = sets.iter().map(Vec::len).max().unwrap();
            let min = sets.iter().map(Vec::len).min().unwrap();
            prop_assert!(max - min <= 1);
        }
    }
}
