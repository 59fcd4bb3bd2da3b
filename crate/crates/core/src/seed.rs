//! Order-independent seed derivation.
//!
//! Seeds are mixed with SplitMix64 so a derived seed depends only on its
//! inputs, never on the order in which points or frames are scheduled.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hash an ordered list of words into one seed.
pub fn derive(parts: &[u64]) -> u64 {
    parts.iter().fold(GOLDEN, |acc, &p| splitmix(acc.wrapping_add(GOLDEN) ^ splitmix(p)))
}

/// Seed for one operating point of a sweep.
pub fn point_seed(master: u64, ebn0_db: f64, point_index: usize) -> u64 {
    derive(&[master, ebn0_db.to_bits(), point_index as u64])
}
