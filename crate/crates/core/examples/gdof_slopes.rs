//! Recovers the pre-log of each bound along L = P^alpha.

use owpn::gdof::{bound_prelog, gdof_exact, log_grid, phase_prelog};
use owpn::BoundKind;

fn main() {
    let grid = log_grid(1e4, 1e8, 5);
    println!("{:>6} {:>9} {:>9} {:>9} {:>9}", "alpha", "new", "gdof", "phase", "min(a/2,1/4)");
    for alpha in [0.0, 0.1, 0.25, 0.4, 0.5, 0.75, 1.0, 2.0] {
        let new = bound_prelog(BoundKind::OwpnNewTh4, alpha, 1.0, &grid).unwrap();
        let phase = bound_prelog(BoundKind::Phase, alpha, 1.0, &grid).unwrap();
        println!(
            "{alpha:>6} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            new.slope,
            gdof_exact(alpha).unwrap(),
            phase.slope,
            phase_prelog(alpha).unwrap()
        );
    }
}
