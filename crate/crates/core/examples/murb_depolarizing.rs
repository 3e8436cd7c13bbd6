//! m-URB on single-qubit depolarizing noise. The fitted decay rate should sit
//! near p^2 for each strength.
//!
//! cargo run --release --example murb_depolarizing

use urbench::channels::depolarizing;
use urbench::clifford::CliffordGroup;
use urbench::urb::{run_murb, UrbConfig};

fn main() -> urbench::Result<()> {
    let group = CliffordGroup::shared(1)?;
    let cfg = UrbConfig::new(1, (1..=10).collect(), 15, 5, 1024, 2021);
    println!("{:>5} {:>9} {:>9} {:>9}", "p", "exact", "fitted", "B");
    for p in [0.9, 0.8, 0.7, 0.6] {
        let out = run_murb(group, &depolarizing(1, p)?, &cfg)?;
        println!("{p:>5} {:>9.5} {:>9.5} {:>9.5}", p * p, out.fit.u, out.fit.b);
    }
    Ok(())
}
