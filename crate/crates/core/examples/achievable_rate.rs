//! Plug-in rate of the shifted-exponential scheme against the outer bound.

use owpn::achievability::{Experiment, SchemeConfig};
use owpn::{ChannelParams, GdofParams, RngSeed};

fn main() {
    println!("{:>6} {:>6} {:>6} {:>9} {:>9} {:>9} {:>9}", "P", "alpha", "L", "amp", "phase", "total", "bound");
    for power in [1e2, 1e3] {
        for alpha in [0.25, 0.5, 1.0] {
            let l = GdofParams::new(alpha).unwrap().oversampling(power);
            let params = ChannelParams::new(power, 1.0, l);
            let cfg = SchemeConfig::full_power(&params, 50_000, RngSeed::new(3, 0));
            let e = Experiment::run(&params, &cfg).unwrap();
            println!(
                "{power:>6} {alpha:>6} {l:>6} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
                e.rate.amplitude, e.rate.phase, e.rate.total, e.outer_bound
            );
        }
    }
}
