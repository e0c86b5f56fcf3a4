//! Regime map of the symbol-rate (L = 1) outer bound.

use owpn::bounds::{wpn_outer_bound, WpnRegime};
use owpn::{OperatingPoint, Units};

fn main() {
    let sigmas = [1e-4, 1e-3, 1e-2, 0.1, 1.0, 2.0, 4.0, 10.0];
    print!("{:>8}", "P \\ s2");
    for s in sigmas {
        print!("{s:>9}");
    }
    println!();
    for p in [1.0, 10.0, 100.0, 1e3, 1e4] {
        print!("{p:>8}");
        for s in sigmas {
            let tag = match WpnRegime::select(p, s).unwrap() {
                WpnRegime::LargeNoise => "large",
                WpnRegime::Intermediate => "mid",
                WpnRegime::SmallNoise => "small",
            };
            print!("{tag:>9}");
        }
        println!();
    }
    let r = wpn_outer_bound(&OperatingPoint::new(100.0, 0.1, 1.0), Units::Bits).unwrap();
    println!("\nP=100, s2=0.1: {:.4} bits, gap {} bits", r.value, r.gap_bits.unwrap_or(f64::NAN));
}
