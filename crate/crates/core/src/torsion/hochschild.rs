//! Brute-force Hochschild checks for level-(i,j) bimodules over ℤ/N.
//!
//! The multiplicative monoid of nonzero integers acts on `M = ℤ/N` at level
//! `(i, j)`: `m ⋄ x = m^j x` on the left and `x ⋄ n = n^i x` on the right.
//! A 1-cocycle satisfies `f(mn) = m^j f(n) + n^i f(m)`; the universal gcd
//! `w_{i,j}` annihilates `HH^1` and carves out `HH^0` as its torsion.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::numerology;

use super::TorsionError;

/// `base^exp mod n` for possibly negative base.
fn pow_mod(base: i64, exp: u32, n: u64) -> u64 {
    let m = BigInt::from(base).pow(exp).mod_floor(&BigInt::from(n));
    m.to_u64().expect("reduced residue fits")
}

fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A finitely presented cocycle: values on the generators `−1` and the
/// primes up to the bound, extended to composites by the cocycle rule.
#[derive(Debug, Clone)]
struct ScalarCocycle {
    i: u32,
    j: u32,
    n_modulus: u64,
    generators: BTreeMap<i64, u64>,
}

impl ScalarCocycle {
    /// `f(n)` by factorization and the extension rule
    /// `f(mn) = m^j f(n) + n^i f(m)`. Only defined on the monoid generated
    /// by the presented generators.
    fn eval(&self, n: i64) -> u64 {
        assert!(n != 0);
        let nn = self.n_modulus;
        if n == 1 {
            return 0;
        }
        if let Some(&v) = self.generators.get(&n) {
            return v;
        }
        // Split off one generator p with n = p·m.
        let (p, m) = if n < 0 {
            (-1i64, -n)
        } else {
            let mut d = 2;
            while n % d != 0 {
                d += 1;
            }
            (d, n / d)
        };
        let fp = *self
            .generators
            .get(&p)
            .unwrap_or_else(|| panic!("{n} is not generator-smooth"));
        let fm = self.eval(m);
        // f(p·m) = p^j f(m) + m^i f(p)
        let t1 = (pow_mod(p, self.j, nn) as u128 * fm as u128) % nn as u128;
        let t2 = (pow_mod(m, self.i, nn) as u128 * fp as u128) % nn as u128;
        ((t1 + t2) % nn as u128) as u64
    }

    /// eq6 consistency on a pair of generators:
    /// `(m^i − m^j) f(n) = (n^i − n^j) f(m)` in ℤ/N.
    fn eq6_pair(&self, m: i64, n: i64) -> bool {
        let nn = self.n_modulus;
        let theta = |k: i64| (pow_mod(k, self.i, nn) + nn - pow_mod(k, self.j, nn)) % nn;
        let fm = self.eval(m);
        let fnv = self.eval(n);
        (theta(m) as u128 * fnv as u128) % nn as u128
            == (theta(n) as u128 * fm as u128) % nn as u128
    }
}

/// One randomized cocycle trial.
#[derive(Debug, Clone)]
pub struct CocycleTrial {
    pub generators: BTreeMap<i64, u64>,
    /// The random assignment extended to a genuine cocycle.
    pub consistent: bool,
    /// `w·f` is a refined coboundary (vacuous when inconsistent).
    pub refined_coboundary: bool,
}

/// Report of the level-(i,j) Hochschild checks over ℤ/N.
#[derive(Debug, Clone)]
pub struct HochschildReport {
    pub i: i64,
    pub j: i64,
    pub n_modulus: u64,
    pub w: BigInt,
    /// Elements of HH^0 computed by direct enumeration.
    pub hh0: Vec<u64>,
    /// HH^0 equals the w-torsion subgroup of ℤ/N.
    pub hh0_matches: bool,
    /// With j = 0 every cocycle is an actual coboundary.
    pub all_coboundaries_when_j_zero: Option<bool>,
    /// Prop-style checks when j = i−1 and 2M = wM = 0: f vanishes on
    /// squares and multiples of 4, and f(2n) = f(2) for odd n.
    pub two_torsion_laws: Option<bool>,
    pub trials: Vec<CocycleTrial>,
}

impl HochschildReport {
    pub fn pass(&self) -> bool {
        self.hh0_matches
            && self.all_coboundaries_when_j_zero.unwrap_or(true)
            && self.two_torsion_laws.unwrap_or(true)
            && self
                .trials
                .iter()
                .all(|t| !t.consistent || t.refined_coboundary)
            && self.trials.iter().any(|t| t.consistent)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "i": self.i,
            "j": self.j,
            "modulus": self.n_modulus,
            "w": self.w.to_string(),
            "hh0": self.hh0,
            "hh0_matches": self.hh0_matches,
            "all_coboundaries_when_j_zero": self.all_coboundaries_when_j_zero,
            "two_torsion_laws": self.two_torsion_laws,
            "consistent_trials": self.trials.iter().filter(|t| t.consistent).count(),
            "trials": self.trials.len(),
            "pass": self.pass(),
        })
    }
}

/// All prime factors of `|n|` are at most `bound`.
fn smooth(n: i64, bound: i64) -> bool {
    let mut m = n.abs();
    let mut d = 2;
    while d <= m {
        if m % d == 0 {
            if d > bound {
                return false;
            }
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    true
}

/// Level-(i,j) Hochschild verification over `M = ℤ/N`.
///
/// Part (a) computes `HH^0` directly and compares it with the `w_{i,j}`
/// torsion. Part (b) generates random cocycles on the generators (primes up
/// to `prime_bound` and `−1`) subject to pairwise eq6 compatibility, then
/// checks that `w·f` is a refined coboundary. Inconsistent generator draws
/// are reported, not raised.
pub fn hochschild_verify(
    i: i64,
    j: i64,
    n_modulus: u64,
    prime_bound: i64,
    trials: usize,
    seed: u64,
) -> Result<HochschildReport, TorsionError> {
    if i <= j || j < 0 || n_modulus < 2 {
        return Err(TorsionError::UncertifiedW { i, j });
    }
    let w = numerology::w_certified(i, j).map_err(|_| TorsionError::UncertifiedW { i, j })?;
    if !w.certified {
        return Err(TorsionError::UncertifiedW { i, j });
    }
    let nn = n_modulus;
    let iu = i as u32;
    let ju = j as u32;

    // (a) HH^0 by enumeration: x with (m^j − m^i)x ≡ 0 for all m in range.
    let mut hh0 = Vec::new();
    for x in 0..nn {
        let ok = (2..=50)
            .flat_map(|m| [m, -m])
            .all(|m| {
                let lhs = (pow_mod(m, ju, nn) as u128 * x as u128) % nn as u128;
                let rhs = (pow_mod(m, iu, nn) as u128 * x as u128) % nn as u128;
                lhs == rhs
            });
        if ok {
            hh0.push(x);
        }
    }
    let w_mod = w.value.mod_floor(&BigInt::from(nn)).to_u64().unwrap();
    let expected: Vec<u64> = (0..nn)
        .filter(|x| (w_mod as u128 * *x as u128) % nn as u128 == 0)
        .collect();
    let hh0_matches = hh0 == expected;

    // Generators: −1 and primes up to the bound.
    let mut gens: Vec<i64> = vec![-1];
    gens.extend((2..=prime_bound).filter(|&p| is_prime(p)));

    let theta = |k: i64| (pow_mod(k, iu, nn) + nn - pow_mod(k, ju, nn)) % nn;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out_trials = Vec::new();
    let mut all_cob = true;
    let mut two_laws = true;
    let unit_factor = (pow_mod(-1, iu, nn) + pow_mod(-1, ju, nn)) % nn;
    for _ in 0..trials {
        // Assign f on the generators one by one, keeping only values
        // compatible (eq6) with everything assigned so far. An empty
        // candidate set is recorded as an inconsistent draw, not raised.
        let mut assignment: BTreeMap<i64, u64> = BTreeMap::new();
        for &p in &gens {
            let mut candidates: Vec<u64> = (0..nn).collect();
            if p == -1 {
                // ((−1)^i + (−1)^j)·f(−1) = f(1) = 0.
                candidates
                    .retain(|&x| (unit_factor as u128 * x as u128) % nn as u128 == 0);
            }
            for (&q, &fq) in &assignment {
                candidates.retain(|&x| {
                    (theta(q) as u128 * x as u128) % nn as u128
                        == (theta(p) as u128 * fq as u128) % nn as u128
                });
            }
            let pick = if candidates.is_empty() {
                rng.gen_range(0..nn)
            } else {
                candidates[rng.gen_range(0..candidates.len())]
            };
            assignment.insert(p, pick);
        }
        let f = ScalarCocycle {
            i: iu,
            j: ju,
            n_modulus: nn,
            generators: assignment.clone(),
        };
        // Consistency: eq6 on all generator pairs makes the extension a
        // genuine cocycle; verify the cocycle rule on a range to be sure.
        let mut consistent = gens
            .iter()
            .flat_map(|&a| gens.iter().map(move |&b| (a, b)))
            .all(|(a, b)| f.eq6_pair(a, b));
        if consistent {
            'outer: for m in (-12i64..=12).filter(|&m| m != 0 && smooth(m, prime_bound)) {
                for n in (-12i64..=12).filter(|&n| n != 0 && smooth(n, prime_bound)) {
                    let lhs = f.eval(m * n);
                    let rhs = ((pow_mod(m, ju, nn) as u128 * f.eval(n) as u128
                        + pow_mod(n, iu, nn) as u128 * f.eval(m) as u128)
                        % nn as u128) as u64;
                    if lhs != rhs {
                        consistent = false;
                        break 'outer;
                    }
                }
            }
        }

        let mut refined = true;
        if consistent {
            // Bezout witnesses over small arguments reach gcd = w, then
            // b = Σ a_s f(n_s) must satisfy w·f(n) = (n^i − n^j)·b.
            let ns: Vec<i64> = (2..=13).chain([-2, -3]).collect();
            let mut gcur = BigInt::zero();
            let mut coeffs: Vec<(i64, BigInt)> = Vec::new();
            for &n in &ns {
                let t = BigInt::from(n).pow(iu) - BigInt::from(n).pow(ju);
                if t.is_zero() {
                    continue;
                }
                if gcur.is_zero() {
                    coeffs.push((n, if t.is_negative() { -BigInt::from(1) } else { BigInt::from(1) }));
                    gcur = t.abs();
                    continue;
                }
                let e = BigInt::extended_gcd(&gcur, &t);
                for (_, c) in coeffs.iter_mut() {
                    *c *= &e.x;
                }
                coeffs.push((n, e.y.clone()));
                gcur = e.gcd;
            }
            if gcur != w.value {
                return Err(TorsionError::BezoutFailure {
                    got: gcur,
                    want: w.value.clone(),
                });
            }
            let mut b: u64 = 0;
            for (n, a) in &coeffs {
                let am = a.mod_floor(&BigInt::from(nn)).to_u64().unwrap();
                b = ((b as u128 + am as u128 * f.eval(*n) as u128) % nn as u128) as u64;
            }
            let range: Vec<i64> = (-20i64..=20)
                .filter(|&n| n != 0 && smooth(n, prime_bound))
                .collect();
            for &n in &range {
                let lhs = (w_mod as u128 * f.eval(n) as u128) % nn as u128;
                let rhs = (theta(n) as u128 * b as u128) % nn as u128;
                if lhs != rhs {
                    refined = false;
                    break;
                }
            }
            // With j = 0 the annihilator is 1, so f itself is a coboundary.
            if j == 0 && w_mod % nn == 1 % nn {
                for &n in &range {
                    if f.eval(n) != (theta(n) as u128 * b as u128 % nn as u128) as u64 {
                        all_cob = false;
                    }
                }
            }
            // Prop-style 2-torsion laws at level (i, i−1) with 2M = 0.
            if j == i - 1 && j > 0 && nn == 2 {
                for n in [1i64, 4, 9, 16, 25, 36, -4, -8, 12, 20] {
                    let square = [1, 4, 9, 16, 25, 36].contains(&n);
                    if (square || n % 4 == 0) && smooth(n, prime_bound) && f.eval(n) != 0 {
                        two_laws = false;
                    }
                }
                for m in [1i64, 3, 5, 7, -1, -3] {
                    if f.eval(2 * m) != f.eval(2) {
                        two_laws = false;
                    }
                }
            }
        }
        out_trials.push(CocycleTrial {
            generators: assignment,
            consistent,
            refined_coboundary: refined,
        });
    }

    Ok(HochschildReport {
        i,
        j,
        n_modulus,
        w: w.value,
        hh0,
        hh0_matches,
        all_coboundaries_when_j_zero: (j == 0).then_some(all_cob),
        two_torsion_laws: (j == i - 1 && j > 0 && nn == 2).then_some(two_laws),
        trials: out_trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hh0_level_2_1_mod_4() {
        // HH^0 = the 2-torsion of ℤ/4 = {0, 2}.
        let r = hochschild_verify(2, 1, 4, 13, 5, 11).unwrap();
        assert_eq!(r.hh0, vec![0, 2]);
        assert!(r.hh0_matches);
        assert!(r.pass(), "{:?}", r.to_json());
    }

    #[test]
    fn level_3_0_mod_9_every_cocycle_coboundary() {
        let r = hochschild_verify(3, 0, 9, 13, 10, 17).unwrap();
        assert_eq!(r.w, BigInt::from(1));
        assert_eq!(r.all_coboundaries_when_j_zero, Some(true));
        assert!(r.pass(), "{:?}", r.to_json());
    }

    #[test]
    fn level_3_2_mod_2_two_torsion_laws() {
        // f(n) = 0 for squares and 4|n; f(2n) = f(2) for odd n.
        let r = hochschild_verify(3, 2, 2, 13, 10, 23).unwrap();
        assert_eq!(r.two_torsion_laws, Some(true));
        assert!(r.pass(), "{:?}", r.to_json());
    }

    #[test]
    fn annihilation_grid() {
        for &(i, j) in &[(2i64, 1i64), (3, 1), (3, 2), (4, 2)] {
            for &n in &[2u64, 3, 4, 8, 9] {
                let r = hochschild_verify(i, j, n, 13, 6, 29).unwrap();
                assert!(r.pass(), "({i},{j}) mod {n}: {:?}", r.to_json());
            }
        }
    }

    #[test]
    fn rejects_bad_level() {
        assert!(hochschild_verify(1, 1, 4, 13, 1, 0).is_err());
        assert!(hochschild_verify(2, -1, 4, 13, 1, 0).is_err());
    }
}
