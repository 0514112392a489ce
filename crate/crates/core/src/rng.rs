//! Seeded random streams.
//!
//! Every sampling worker gets its own ChaCha stream derived from the run seed
//! and a work-item index, so results do not depend on the thread count.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactalg::Rational;

pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Integer in `[-9, 9]`, excluding zero when `unit` is set.
pub fn small_int<R: Rng>(rng: &mut R, unit: bool) -> Rational {
    loop {
        let v: i64 = rng.gen_range(-9..=9);
        if !unit || v != 0 {
            return Rational::from_integer(BigInt::from(v));
        }
    }
}
