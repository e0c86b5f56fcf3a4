//! Evaluates every bound at one operating point and prints the
//! amplitude/phase split of the new outer bound.
//!
//! ```text
//! cargo run --example bound_eval -- 1e4 0.5 100
//! ```

use owpn::bounds::owpn_new_outer_bound;
use owpn::{BoundKind, ChannelParams, Units};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (power, sigma2, l) = match args[..] {
        [p, s, l] => (p, s, l as u32),
        [] => (1e4, 0.5, 100),
        _ => return Err("usage: bound_eval [P sigma2 L]".into()),
    };
    let params = ChannelParams::new(power, sigma2, l).validate()?;
    let point = params.operating_point();
    println!("P = {power}, sigma2 = {sigma2}, L = {l}");
    for kind in BoundKind::ALL {
        match kind.evaluate(&point, Units::Bits, 0.0) {
            Ok(r) => println!("  {:<14} {:>10.4} bits {}", kind.as_str(), r.value, r.flags_field()),
            Err(e) => println!("  {:<14} n/a ({e})", kind.as_str()),
        }
    }
    let new = owpn_new_outer_bound(&point, Units::Nats)?;
    println!(
        "new bound = amplitude {:.4} + phase {:.4} nats",
        new.diagnostics["amplitude_rate_nats"], new.diagnostics["phase_rate_nats"]
    );
    Ok(())
}
