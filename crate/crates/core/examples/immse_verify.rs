//! Fisher fixed point and the quadrature form of the phase bound against
//! their closed forms.

use owpn::bounds::phase_rate_raw_nats;
use owpn::immse::{fisher_fixed_point, fisher_recursion, immse_entropy_bound, DEFAULT_TOL};
use owpn::quadrature::QuadratureConfig;
use owpn::OperatingPoint;

fn main() {
    let (a, b) = (1.0, 1.0);
    let path = fisher_recursion(a, b, 8, 0.0);
    println!("J_k from 0: {path:.6?}");
    let fp = fisher_fixed_point(a, b, DEFAULT_TOL).unwrap();
    println!("J* = {:.15} (closed) / {:.15} (iterated, {} steps)", fp.j_star, fp.j_star_iterated, fp.iterations);

    println!("\n{:>8} {:>8} {:>14} {:>14} {:>10}", "a", "b", "quadrature", "closed", "|diff|");
    for (a, b) in [(1e-3, 1e3), (0.1, 10.0), (1.0, 1.0), (10.0, 0.1), (1e3, 1e-3)] {
        let e = immse_entropy_bound(a, b, &QuadratureConfig::default()).unwrap();
        let closed = phase_rate_raw_nats(&OperatingPoint::new(b, 1.0 / a, 1.0));
        println!(
            "{a:>8} {b:>8} {:>14.10} {closed:>14.10} {:>10.2e}",
            e.phase_rate_upper_bound,
            (e.phase_rate_upper_bound - closed).abs()
        );
    }
}
