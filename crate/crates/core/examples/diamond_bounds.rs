//! Turns an RB decay parameter and a unitarity into bounds on the diamond
//! distance, and checks the fidelity-unitarity inequality.
//!
//! cargo run --example diamond_bounds [p_rb] [u]

use urbench::channels::{avg_gate_fidelity, depolarizing, diamond_bounds, fidelity_unitarity_bound_holds};

fn main() -> urbench::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<f64>().expect("numeric argument"));
    let p_rb = args.next().unwrap_or(0.98);
    let u = args.next().unwrap_or(p_rb * p_rb);
    for d in [2, 4] {
        let b = diamond_bounds(p_rb, u, d)?;
        println!("d = {d}: {:.3e} <= diamond distance <= {:.3e}", b.lower, b.upper);
    }

    let ch = depolarizing(1, p_rb)?;
    let bound = fidelity_unitarity_bound_holds(&ch)?;
    println!(
        "depolarizing({p_rb}): F_avg = {:.6}, bound slack = {:.1e}, holds = {}",
        avg_gate_fidelity(&ch)?,
        bound.slack,
        bound.holds
    );
    Ok(())
}
