#![allow(dead_code)]

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sectorcert::Polynomial;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Degree `deg`, coefficients uniform in `[-bound, bound]`, leading
/// coefficient in `[1, bound]`.
pub fn random_poly(rng: &mut impl Rng, deg: usize, bound: i64) -> Polynomial {
    let mut c: Vec<BigInt> = (0..deg).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
    c.push(BigInt::from(rng.gen_range(1..=bound)));
    Polynomial::new(c)
}

/// A factor of degree `deg` with nonzero leading coefficient of either sign.
pub fn random_factor(rng: &mut impl Rng, deg: usize, bound: i64) -> Polynomial {
    let mut c: Vec<BigInt> = (0..deg).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
    let mut lead = 0;
    while lead == 0 {
        lead = rng.gen_range(-bound..=bound);
    }
    c.push(BigInt::from(lead));
    Polynomial::new(c)
}

/// `g * h` with positive leading coefficient and total degree in `[2, max_deg]`.
pub fn planted_product(rng: &mut impl Rng, max_deg: usize, bound: i64) -> Polynomial {
    let dg = rng.gen_range(1..max_deg);
    let dh = rng.gen_range(1..=max_deg - dg);
    let f = &random_factor(rng, dg, bound) * &random_factor(rng, dh, bound);
    if f.leading() < BigInt::from(0) {
        -&f
    } else {
        f
    }
}

/// Base-`b` digits of `x`, lowest first.
pub fn digit_poly(x: u64, b: u64) -> Polynomial {
    let mut c = Vec::new();
    let mut x = x;
    while x > 0 {
        c.push(BigInt::from(x % b));
        x /= b;
    }
    Polynomial::new(c)
}
