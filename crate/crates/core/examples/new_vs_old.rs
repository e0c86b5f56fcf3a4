//! Where the new outer bound beats the old one: fix P and grow L.

use owpn::bounds::{owpn_new_outer_bound, owpn_old_outer_bound};
use owpn::{OperatingPoint, Units};

fn main() {
    let power = 1e6;
    println!("{:>10} {:>12} {:>12} {:>10}", "L", "old (nats)", "new (nats)", "new-old");
    for exp in 0..=6 {
        let l = 10f64.powi(exp);
        let point = OperatingPoint::new(power, 1.0, l);
        let old = owpn_old_outer_bound(&point, 0.0, Units::Nats).unwrap().value;
        let new = owpn_new_outer_bound(&point, Units::Nats).unwrap().value;
        println!("{l:>10} {old:>12.4} {new:>12.4} {:>10.4}", new - old);
    }
}
