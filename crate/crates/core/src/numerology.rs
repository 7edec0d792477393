//! Integer invariants of the multiplication action.
//!
//! The central quantity is `w_{i,j} = gcd_{m≠0}(m^i − m^j)`, the universal
//! annihilator of level-(i,j) Hochschild cohomology. A value is *certified*
//! when a structural lower bound (from the cyclic structure of `(ℤ/l^s)^*`)
//! meets the brute-force upper bound prime by prime. Derived from it are
//! `r^& = lcm{1,…,r}` and the bounds `N_i` and `M` for abelian schemes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumerologyError {
    #[error("w_(i,j) needs i > j and i >= 0, got i={i}, j={j}")]
    BadIndices { i: i64, j: i64 },
    #[error("brute-force bound must be at least 3, got {0}")]
    BadBound(u64),
    #[error("lcm range must be at least 1, got {0}")]
    BadLcmRange(i64),
    #[error("bound_N needs g >= 1, cd >= 0, 0 <= i <= 2g, got i={i}, g={g}, cd={cd}")]
    BadBoundArgs { i: i64, g: i64, cd: i64 },
    #[error("bound_M enumeration is out of desk range: lcm(1..{r}) = {lcm} is too large")]
    OutOfDeskRange { r: i64, lcm: BigInt },
}

/// Escalation schedule for the brute-force upper bound.
const BRUTE_SCHEDULE: [u64; 7] = [50, 100, 200, 400, 800, 1600, 3200];

/// One certified (or provisionally bounded) value of `w_{i,j}`.
///
/// `prime_valuations` maps each candidate prime to `(lower, upper)` exponent
/// bounds. `certified` means the two agree for every prime that can occur and
/// the brute-force gcd carries no stray factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WijResult {
    pub i: i64,
    pub j: i64,
    pub value: BigInt,
    pub certified: bool,
    pub prime_valuations: BTreeMap<u64, (u32, u32)>,
}

fn pow_big(m: i64, e: u32) -> BigInt {
    BigInt::from(m).pow(e)
}

/// gcd of `m^i − m^j` over `2 ≤ |m| ≤ bound`.
///
/// This is an upper bound for the true `w_{i,j}` (a multiple of it), and is
/// nonincreasing in `bound`.
pub fn w_bruteforce(i: i64, j: i64, bound: u64) -> Result<BigInt, NumerologyError> {
    if bound < 3 {
        return Err(NumerologyError::BadBound(bound));
    }
    if j < 0 {
        return if i >= 0 {
            Ok(BigInt::one())
        } else {
            Err(NumerologyError::BadIndices { i, j })
        };
    }
    if i <= j {
        return Err(NumerologyError::BadIndices { i, j });
    }
    let (iu, ju) = (i as u32, j as u32);
    let mut acc = BigInt::zero();
    for m in 2..=(bound as i64) {
        for m in [m, -m] {
            let v = pow_big(m, iu) - pow_big(m, ju);
            acc = acc.gcd(&v);
        }
        if acc.is_one() {
            break;
        }
    }
    Ok(acc)
}

/// Largest `s ≤ j` for which the structure of `(ℤ/l^s)^*` forces `l^s | w_{i,j}`.
///
/// For odd `l` the condition at level `s` is `l^{s−1}(l−1) | i−j`. For `l = 2`
/// it is vacuous at `s = 1`, `2 | i−j` at `s = 2`, and `2^{s−2} | i−j` above.
/// The cap `s ≤ j` is what makes the converse direction valid.
fn lower_exponent(l: u64, i: i64, j: i64) -> u32 {
    let d = (i - j) as u64;
    let mut best = 0u32;
    let mut s = 1u32;
    while (s as i64) <= j {
        let ok = if l == 2 {
            match s {
                1 => true,
                2 => d % 2 == 0,
                _ => match 2u64.checked_pow(s - 2) {
                    Some(p) => d % p == 0,
                    None => false,
                },
            }
        } else {
            match l.checked_pow(s - 1).and_then(|p| p.checked_mul(l - 1)) {
                Some(q) => d % q == 0,
                None => false,
            }
        };
        if !ok {
            break;
        }
        best = s;
        s += 1;
    }
    best
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Trial-divide `n` by primes up to `cap`. Returns `(factors, leftover)`;
/// `leftover > 1` means a factor beyond the cap survived.
fn trial_factor(n: &BigInt, cap: u64) -> (BTreeMap<u64, u32>, BigInt) {
    let mut out = BTreeMap::new();
    let mut rest = n.abs();
    let mut p = 2u64;
    while p <= cap {
        if is_prime(p) {
            let pb = BigInt::from(p);
            let mut e = 0u32;
            loop {
                let (q, r) = rest.div_rem(&pb);
                if r.is_zero() {
                    rest = q;
                    e += 1;
                } else {
                    break;
                }
            }
            if e > 0 {
                out.insert(p, e);
            }
            if rest.is_one() {
                break;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (out, rest)
}

/// `w_{i,j}` with certification: structural lower bounds against escalating
/// brute-force upper bounds. Uncertified results keep the brute-force value
/// and the disagreeing exponent pairs; they are never silently trusted.
pub fn w_certified(i: i64, j: i64) -> Result<WijResult, NumerologyError> {
    if j < 0 {
        if i < 0 {
            return Err(NumerologyError::BadIndices { i, j });
        }
        return Ok(WijResult {
            i,
            j,
            value: BigInt::one(),
            certified: true,
            prime_valuations: BTreeMap::new(),
        });
    }
    if i <= j {
        return Err(NumerologyError::BadIndices { i, j });
    }
    let d = (i - j) as u64;
    // Only l = 2 and odd primes with l−1 | i−j can divide w; anything with
    // l ≤ i−j+1 covers both.
    let mut candidates: Vec<u64> = vec![2];
    let mut l = 3;
    while l <= d + 1 {
        if is_prime(l) {
            candidates.push(l);
        }
        l += 2;
    }
    let lower: BTreeMap<u64, u32> = candidates
        .iter()
        .map(|&l| (l, lower_exponent(l, i, j)))
        .collect();

    let mut last = BigInt::zero();
    let mut last_factors = BTreeMap::new();
    let mut stray = false;
    for &bound in &BRUTE_SCHEDULE {
        let g = w_bruteforce(i, j, bound)?;
        let (factors, leftover) = trial_factor(&g, 1_000_000);
        stray = !leftover.is_one() || factors.keys().any(|p| !candidates.contains(p));
        let agreed = !stray
            && candidates
                .iter()
                .all(|l| factors.get(l).copied().unwrap_or(0) == lower[l]);
        if agreed {
            let valuations = candidates
                .iter()
                .map(|&l| (l, (lower[&l], lower[&l])))
                .collect();
            return Ok(WijResult {
                i,
                j,
                value: g,
                certified: true,
                prime_valuations: valuations,
            });
        }
        last = g;
        last_factors = factors;
    }
    // Bounds disagree within the schedule: report both sides, uncertified.
    let mut valuations: BTreeMap<u64, (u32, u32)> = candidates
        .iter()
        .map(|&l| (l, (lower[&l], last_factors.get(&l).copied().unwrap_or(0))))
        .collect();
    for (&p, &e) in &last_factors {
        valuations.entry(p).or_insert((0, e));
    }
    let _ = stray;
    Ok(WijResult {
        i,
        j,
        value: last,
        certified: false,
        prime_valuations: valuations,
    })
}

/// `r^& = lcm{1, …, r}`.
pub fn lcm_sharp(r: i64) -> Result<BigInt, NumerologyError> {
    if r < 1 {
        return Err(NumerologyError::BadLcmRange(r));
    }
    let mut acc = BigInt::one();
    for a in 2..=r {
        acc = acc.lcm(&BigInt::from(a));
    }
    Ok(acc)
}

/// `N_i = ∏_{a=0}^{inf(cd, 2g−1)} w_{i,i−a−1}`, with the convention that
/// factors with negative second index are 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundN {
    pub value: BigInt,
    pub certified: bool,
    pub factors: Vec<WijResult>,
}

pub fn bound_n(i: i64, g: i64, cd: i64) -> Result<BoundN, NumerologyError> {
    if g < 1 || cd < 0 || i < 0 || i > 2 * g {
        return Err(NumerologyError::BadBoundArgs { i, g, cd });
    }
    let hi = cd.min(2 * g - 1);
    let mut value = BigInt::one();
    let mut certified = true;
    let mut factors = Vec::new();
    for a in 0..=hi {
        let w = w_certified(i, i - a - 1)?;
        value *= &w.value;
        certified &= w.certified;
        factors.push(w);
    }
    Ok(BoundN {
        value,
        certified,
        factors,
    })
}

/// `M` = product of the primes `l` with `l − 1 | inf(cd+1, 2g−1)^&`.
pub fn bound_m(g: i64, cd: i64) -> Result<BigInt, NumerologyError> {
    if g < 1 || cd < 0 {
        return Err(NumerologyError::BadBoundArgs { i: 0, g, cd });
    }
    let r = (cd + 1).min(2 * g - 1);
    let lcm = lcm_sharp(r)?;
    let cap = match lcm.to_u64() {
        Some(v) if v <= 2_000_000 => v,
        _ => return Err(NumerologyError::OutOfDeskRange { r, lcm }),
    };
    let mut m = BigInt::one();
    for l in 2..=cap + 1 {
        if is_prime(l) && cap % (l - 1) == 0 {
            m *= BigInt::from(l);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use num_traits::One;
    use proptest::prelude::*;

    // Independent oracle: plain gcd over an explicit list of m values.
    fn gcd_over(i: u32, j: u32, ms: &[i64]) -> BigInt {
        let mut acc = BigInt::zero();
        for &m in ms {
            acc = acc.gcd(&(pow_big(m, i) - pow_big(m, j)));
        }
        acc
    }

    #[test]
    fn brute_force_matches_spec_examples() {
        // gcd(2^3−2, 3^3−3) = gcd(6, 24) = 6, and further m keep it at 6.
        assert_eq!(gcd_over(3, 1, &[2, 3]), BigInt::from(6));
        assert_eq!(w_bruteforce(2, 1, 50).unwrap(), BigInt::from(2));
        assert_eq!(w_bruteforce(5, 0, 50).unwrap(), BigInt::from(1));
        assert_eq!(w_bruteforce(3, 1, 50).unwrap(), BigInt::from(6));
        // gcd(12, 72, 600) = 12
        assert_eq!(gcd_over(4, 2, &[2, 3, 5]), BigInt::from(12));
        assert_eq!(w_bruteforce(4, 2, 50).unwrap(), BigInt::from(12));
    }

    #[test]
    fn brute_force_rejects_bad_input() {
        assert!(w_bruteforce(2, 1, 2).is_err());
        assert!(w_bruteforce(1, 1, 50).is_err());
        assert!(w_bruteforce(0, 3, 50).is_err());
        assert_eq!(w_bruteforce(1, -1, 50).unwrap(), BigInt::one());
    }

    #[test]
    fn certified_examples() {
        let w = w_certified(2, 1).unwrap();
        assert_eq!(w.value, BigInt::from(2));
        assert!(w.certified);
        assert_eq!(w.prime_valuations[&2], (1, 1));

        let w = w_certified(1, -1).unwrap();
        assert_eq!(w.value, BigInt::one());
        assert!(w.certified);

        let w = w_certified(4, 2).unwrap();
        assert_eq!(w.value, BigInt::from(12));
        assert!(w.certified);
        assert_eq!(w.prime_valuations[&2], (2, 2));
        assert_eq!(w.prime_valuations[&3], (1, 1));
    }

    #[test]
    fn certified_j_zero_is_one() {
        for i in 1..=10 {
            let w = w_certified(i, 0).unwrap();
            assert!(w.certified, "w_({i},0) not certified");
            assert_eq!(w.value, BigInt::one(), "w_({i},0) != 1");
        }
    }

    #[test]
    fn parity_law() {
        // w_{i,j} = 2 whenever i−j is odd and j ≥ 1.
        for i in 2..=12i64 {
            for j in 1..i {
                if (i - j) % 2 == 1 {
                    let w = w_certified(i, j).unwrap();
                    assert!(w.certified);
                    assert_eq!(w.value, BigInt::from(2), "w_({i},{j})");
                }
            }
        }
    }

    #[test]
    fn divisibility_law() {
        // Certified w_{i,j} divides m^i − m^j for 500 pseudorandom m.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for &(i, j) in &[(4i64, 2i64), (5, 3), (6, 2), (7, 3), (9, 5)] {
            let w = w_certified(i, j).unwrap();
            assert!(w.certified);
            for _ in 0..100 {
                let m: i64 = rng.gen_range(-10_000..10_000);
                if m == 0 {
                    continue;
                }
                let v = pow_big(m, i as u32) - pow_big(m, j as u32);
                assert!(v.is_multiple_of(&w.value), "w_({i},{j}) ∤ {m}^{i}−{m}^{j}");
            }
        }
    }

    #[test]
    fn lcm_sharp_values() {
        assert_eq!(lcm_sharp(1).unwrap(), BigInt::from(1));
        assert_eq!(lcm_sharp(4).unwrap(), BigInt::from(12));
        assert_eq!(lcm_sharp(5).unwrap(), BigInt::from(60));
        assert!(lcm_sharp(0).is_err());
    }

    #[test]
    fn bound_n_examples() {
        let b = bound_n(2, 1, 0).unwrap();
        assert_eq!(b.value, BigInt::from(2));
        assert!(b.certified);
        let b = bound_n(1, 1, 0).unwrap();
        assert_eq!(b.value, BigInt::one());
        let b = bound_n(0, 2, 3).unwrap();
        assert_eq!(b.value, BigInt::one());
        assert!(bound_n(5, 2, 0).is_err());
    }

    #[test]
    fn bound_m_examples() {
        assert_eq!(bound_m(1, 0).unwrap(), BigInt::from(2));
        assert_eq!(bound_m(2, 2).unwrap(), BigInt::from(42));
        assert_eq!(bound_m(2, 0).unwrap(), BigInt::from(2));
    }

    #[test]
    fn bound_m_is_squarefree_and_even() {
        for g in 1..=3i64 {
            for cd in 0..=3i64 {
                let m = bound_m(g, cd).unwrap();
                assert!(m.is_multiple_of(&BigInt::from(2)));
                let (factors, left) = trial_factor(&m, 10_000);
                assert!(left.is_one());
                assert!(factors.values().all(|&e| e == 1), "M({g},{cd}) not squarefree");
            }
        }
    }

    proptest! {
        #[test]
        fn brute_force_monotone(i in 1i64..9, dj in 1i64..4, b1 in 3u64..40, extra in 1u64..40) {
            let j = i - dj;
            prop_assume!(j >= 0);
            let b2 = b1 + extra;
            let w1 = w_bruteforce(i + dj, j, b1).unwrap();
            let w2 = w_bruteforce(i + dj, j, b2).unwrap();
            // Larger range ⇒ the gcd divides the smaller-range gcd.
            prop_assert!(w1.is_multiple_of(&w2));
        }

        #[test]
        fn certified_divides_brute(i in 1i64..10, dj in 1i64..5) {
            let j = i - dj;
            prop_assume!(j >= 0 && i + dj <= 12);
            let w = w_certified(i + dj, j).unwrap();
            let b = w_bruteforce(i + dj, j, 50).unwrap();
            prop_assert!(b.is_multiple_of(&w.value));
        }
    }
}
