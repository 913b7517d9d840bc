use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tfr_exact::Rational;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 20;

/// Random positive rationals `p/q` with `p, q <= 100` and value in `(0, 10]`.
///
/// `q` is drawn first, then `p` uniformly among the admissible numerators.
pub fn sample_points(dim: usize, count: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let q: i64 = rng.gen_range(1..=100);
                    let p: i64 = rng.gen_range(1..=(10 * q).min(100));
                    Rational::new(p.into(), q.into())
                })
                .collect()
        })
        .collect()
}
