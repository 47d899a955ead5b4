#![allow(dead_code)]

use std::sync::Arc;

use densicohom::exactlin::Rational;
use densicohom::multiindex::MultiIndex;
use densicohom::params::ParamSpace;
use densicohom::symcalc::{Poly, PolyOperator};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

pub fn small_rational(rng: &mut StdRng) -> Rational {
    q(rng.gen_range(-9..=9), rng.gen_range(1..=6))
}

pub fn random_params(rng: &mut StdRng, n: usize) -> Arc<ParamSpace> {
    let lambda = (0..n).map(|_| small_rational(rng)).collect();
    Arc::new(ParamSpace::new(lambda, small_rational(rng)).unwrap())
}

pub fn random_multiindex(rng: &mut StdRng, n: usize, max_order: u32) -> MultiIndex {
    let mut left = rng.gen_range(0..=max_order);
    let mut entries = vec![0u32; n];
    for e in entries.iter_mut() {
        let take = rng.gen_range(0..=left);
        *e = take;
        left -= take;
    }
    MultiIndex::new(entries)
}

pub fn random_poly(rng: &mut StdRng, max_degree: usize) -> Poly {
    let d = rng.gen_range(0..=max_degree);
    Poly::new((0..=d).map(|_| small_rational(rng)).collect())
}

/// Random operator with order ≤ `max_order` and coefficient degree ≤ `max_degree`.
pub fn random_operator(rng: &mut StdRng, params: &Arc<ParamSpace>, max_order: u32, max_degree: usize) -> PolyOperator {
    let terms = rng.gen_range(1..=4);
    PolyOperator::from_terms(
        params.clone(),
        (0..terms).map(|_| (random_multiindex(rng, params.n(), max_order), random_poly(rng, max_degree))),
    )
    .unwrap()
}

/// Random constant-coefficient map with order ≤ `max_order`.
pub fn random_constant_map(
    rng: &mut StdRng,
    n: usize,
    max_order: u32,
) -> std::collections::BTreeMap<MultiIndex, Rational> {
    (0..rng.gen_range(1..=5))
        .map(|_| (random_multiindex(rng, n, max_order), small_rational(rng)))
        .collect()
}

/// `#{β ∈ ℕ^slots : |β| = total}` by brute enumeration of bounded tuples.
pub fn brute_count(slots: usize, total: i64) -> u64 {
    if total < 0 {
        return 0;
    }
    let t = total as u64;
    let mut count = 0;
    let mut tuple = vec![0u64; slots];
    loop {
        if tuple.iter().sum::<u64>() == t {
            count += 1;
        }
        let mut j = 0;
        loop {
            if j == slots {
                return count;
            }
            tuple[j] += 1;
            if tuple[j] <= t {
                break;
            }
            tuple[j] = 0;
            j += 1;
        }
    }
}
