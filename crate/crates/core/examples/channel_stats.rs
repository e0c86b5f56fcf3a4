//! Samples the channel and checks its moments against theory.

use owpn::achievability::{sample_scheme_input, SchemeConfig};
use owpn::channel::{matched_block_statistic, noise_residuals, sample_phase, transmit};
use owpn::stats::Moments;
use owpn::{ChannelParams, RngSeed};

fn main() {
    let params = ChannelParams::new(10.0, 1.0, 8);
    let n = 100_000;
    let cfg = SchemeConfig::full_power(&params, n, RngSeed::new(1, 0));
    let x = sample_scheme_input(&cfg, &params).unwrap();
    let phase = sample_phase(&params, n, RngSeed::new(1, 1)).unwrap();
    let blocks = transmit(&params, &x, &phase, RngSeed::new(1, 2)).unwrap();

    let noise: Moments = noise_residuals(&blocks, &phase).map(|w| w.norm_sqr()).collect();
    let inc: Moments = phase.increments().collect();
    let norm: Moments = blocks.iter().map(|b| b.norm_sqr()).collect();
    let matched: Moments = blocks.iter().map(|b| matched_block_statistic(b).powi(2)).collect();
    println!("E|W|^2      {:.4} (theory 2, z = {:.2})", noise.mean(), noise.z_score(2.0));
    println!("var(dtheta) {:.5} (theory {})", inc.variance(), params.increment_variance());
    let l = params.oversampling_f64();
    println!("E||Y||^2    {:.3} (theory {})", norm.mean(), l * params.per_sample_power() + 2.0 * l);
    println!("E|S|^2      {:.3}", matched.mean());
}
