//! Counter-keyed Gaussian streams: an independent ChaCha8 stream per
//! (seed, replica, component, mode, time segment), so sampling order and
//! parallel scheduling never change the draws.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn mode_rng(seed: u64, replica: u64, component: u16, l: &[i64], segment: u16) -> ChaCha8Rng {
    assert!(l.len() <= 3, "modes live in dimension <= 3");
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&replica.to_le_bytes());
    key[16..18].copy_from_slice(&component.to_le_bytes());
    key[18..20].copy_from_slice(&segment.to_le_bytes());
    for (i, &li) in l.iter().enumerate() {
        let b = (li as i32).to_le_bytes();
        key[20 + 4 * i..24 + 4 * i].copy_from_slice(&b);
    }
    ChaCha8Rng::from_seed(key)
}

pub fn normal_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    (rng.sample(StandardNormal), rng.sample(StandardNormal))
}
