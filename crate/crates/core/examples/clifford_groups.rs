//! Builds the one- and two-qubit Clifford groups and prints a few members
//! with the generator words that produce them.

use std::time::Instant;

use urbench::clifford::{generate_group, sample_uniform};
use urbench::simulator::RngStream;

fn main() -> urbench::Result<()> {
    for n in [1, 2] {
        let start = Instant::now();
        let group = generate_group(n)?;
        println!("n = {n}: {} elements in {:.2?}", group.len(), start.elapsed());
        let mut rng = RngStream::new(1, n as u64);
        for _ in 0..4 {
            let g = sample_uniform(&group, &mut rng);
            let word = g.word_string();
            println!("    {}", if word.is_empty() { "I" } else { &word });
        }
    }
    Ok(())
}
