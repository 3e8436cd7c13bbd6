//! m-URB on the bit-flip channel, showing the per-depth averages and the
//! low-signal flag once the shifted purity drops into shot noise.
//!
//! cargo run --release --example murb_bitflip

use urbench::channels::{bit_flip, unitarity_bitflip_closed};
use urbench::clifford::CliffordGroup;
use urbench::urb::{run_murb, UrbConfig};

fn main() -> urbench::Result<()> {
    let group = CliffordGroup::shared(1)?;
    let cfg = UrbConfig::new(1, (1..=10).collect(), 15, 5, 1024, 2021);
    for p in [0.975, 0.95, 0.9, 0.8] {
        let out = run_murb(group, &bit_flip(p)?, &cfg)?;
        println!(
            "p = {p}: u = {:.4} (exact {:.4}), {} points used, low_signal = {}",
            out.fit.u,
            unitarity_bitflip_closed(p),
            out.fit.points_used,
            out.fit.low_signal
        );
        for avg in &out.averages {
            println!("    m = {:>2}  q = {:>9.5} +- {:.5}", avg.depth, avg.mean, avg.std_err);
        }
    }
    Ok(())
}
