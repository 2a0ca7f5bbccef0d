//! Writes a synthetic bimodal sample to CSV.
//!
//! ```text
//! cargo run -p autoqml-core --example synth_data -- <out.csv> [count] [seed]
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut args = std::env::args().skip(1);
    let Some(out) = args.next() else {
        eprintln!("usage: synth_data <out.csv> [count=20000] [seed=2024]");
        std::process::exit(1);
    };
    let count: usize = args.next().map_or(20_000, |s| s.parse().expect("count"));
    let seed: u64 = args.next().map_or(2024, |s| s.parse().expect("seed"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = autoqml::data::synthetic_bimodal(count, &mut rng);
    if let Some(dir) = std::path::Path::new(&out).parent() {
        std::fs::create_dir_all(dir).expect("create output directory");
    }
    std::fs::write(&out, autoqml::data::samples_to_csv(&samples)).expect("write csv");
    eprintln!("wrote {count} samples to {out}");
}
