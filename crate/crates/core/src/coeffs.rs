//! Rational coefficients of the contracting homotopy and the circle-product
//! formula, and the exact identity suite they satisfy.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalars::Rational;

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn fact_q(n: u64) -> Rational {
    Rational::from_integer(factorial(n))
}

fn check_r(r: u64, t: u64) -> Result<()> {
    if r < 1 || r > t {
        return Err(Error::usage(format!("coefficient index r = {r} outside 1..={t}")));
    }
    Ok(())
}

/// `ξ_r^{s,t,z} = (r+z−1)!(t−r+s)! / ((r−1)!(t−r)!(s+t+z)!)`
pub fn xi(s: u64, t: u64, z: u64, r: u64) -> Result<Rational> {
    check_r(r, t)?;
    Ok(fact_q(r + z - 1) * fact_q(t - r + s) / (fact_q(r - 1) * fact_q(t - r) * fact_q(s + t + z)))
}

/// `c_r^{s,t,z} = (−1)^{sz+z}/(s+t+z)! · ∏_{i<z}(r+i) · ∏_{j=1..s}(t−r+j)`
pub fn c_coeff(s: u64, t: u64, z: u64, r: u64) -> Result<Rational> {
    check_r(r, t)?;
    let mut num = BigInt::one();
    for i in 0..z {
        num *= BigInt::from(r + i);
    }
    for j in 1..=s {
        num *= BigInt::from(t - r + j);
    }
    let sign = if (s * z + z) % 2 == 0 { 1 } else { -1 };
    Ok(Rational::new(num * sign, factorial(s + t + z)))
}

/// Circle-product coefficient for the `l`-th of `d` covector factors:
/// `(−1)^{(m−1)(l−1)} (r+l−2)!(t−r+d−l)! / ((r−1)!(t−r)!(d+t−1)!)`,
/// which is `(−1)^{(m−1)(l−1)} ξ_r^{d−l,t,l−1}`.
pub fn zeta(l: u64, d: u64, t: u64, r: u64, m: u64) -> Result<Rational> {
    if l < 1 || l > d {
        return Err(Error::usage(format!("factor index l = {l} outside 1..={d}")));
    }
    check_r(r, t)?;
    let v = fact_q(r + l - 2) * fact_q(t - r + d - l) / (fact_q(r - 1) * fact_q(t - r) * fact_q(d + t - 1));
    let odd = (m + 1) * (l + 1) % 2 == 1;
    Ok(if odd { -v } else { v })
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub s: u64,
    pub t: u64,
    pub z: u64,
    pub r: u64,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

pub const IDENTITY_NAMES: [&str; 17] = [
    "lEQ1", "lEQ2", "lEQ3", "lEQ4", "lEQ5", "rEQ1", "rEQ2", "rEQ3", "rEQ4", "rEQ5", "lrEQ1", "lrEQ2", "lrEQ3",
    "lrEQ4", "lrEQ5", "lrEQ6", "lrEQ7",
];

impl IdentityReport {
    pub fn failures(&self) -> Vec<&IdentityCheck> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// `(name, checks run, checks passed)` for each identity.
    pub fn summary(&self) -> Vec<(&'static str, usize, usize)> {
        IDENTITY_NAMES
            .iter()
            .map(|&n| {
                let run = self.checks.iter().filter(|c| c.name == n).count();
                let ok = self.checks.iter().filter(|c| c.name == n && c.pass).count();
                (n, run, ok)
            })
            .collect()
    }
}

fn q(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn x(s: u64, t: u64, z: u64, r: u64) -> Rational {
    xi(s, t, z, r).expect("index in range")
}

/// Identities that apply at one `(s, t, z, r)`, as `(name, lhs, rhs)`.
fn identities_at(s: u64, t: u64, z: u64, r: u64) -> Vec<(&'static str, Rational, Rational)> {
    let mut out = Vec::new();
    let inv_tf = Rational::new(BigInt::one(), factorial(t));
    let zero = Rational::zero();
    if s >= 1 && z == 0 {
        if r == t {
            out.push(("lEQ1", x(s, t, 0, t) - q(s) * x(s - 1, t + 1, 0, t + 1), zero.clone()));
        }
        if r == 1 {
            out.push(("lEQ2", x(s, t, 0, 1) + q(s) * x(s - 1, t + 1, 0, 1), inv_tf.clone()));
        }
        out.push(("lEQ3", x(s, t, 0, r), x(s - 1, t, 0, r) - q(r) * x(s - 1, t + 1, 0, r + 1)));
        out.push(("lEQ4", x(s, t, 0, r), q(t - r + 1) * x(s - 1, t + 1, 0, r)));
        if r != t {
            out.push(("lEQ5", x(s, t, 0, r) - x(s, t, 0, r + 1), q(s) * x(s - 1, t + 1, 0, r + 1)));
        }
    }
    if s == 0 && z >= 1 {
        if r == t {
            out.push(("rEQ1", x(0, t, z, t) + q(z) * x(0, t + 1, z - 1, t + 1), inv_tf.clone()));
        }
        if r == 1 {
            out.push(("rEQ2", x(0, t, z, 1) - q(z) * x(0, t + 1, z - 1, 1), zero.clone()));
        }
        out.push(("rEQ3", q(r) * x(0, t + 1, z - 1, r + 1), x(0, t, z, r)));
        out.push(("rEQ4", x(0, t, z - 1, r) - q(t - r + 1) * x(0, t + 1, z - 1, r), x(0, t, z, r)));
        if r >= 2 {
            out.push(("rEQ5", x(0, t, z, r - 1) - x(0, t, z, r), -(q(z) * x(0, t + 1, z - 1, r))));
        }
    }
    if s >= 1 && z >= 1 {
        out.push(("lrEQ1", x(s, t, z, r) + q(r) * x(s - 1, t + 1, z, r + 1) - x(s - 1, t, z, r), zero.clone()));
        out.push(("lrEQ2", q(t - r + 1) * x(s - 1, t + 1, z, r) - x(s, t, z, r), zero.clone()));
        out.push(("lrEQ3", q(r) * x(s, t + 1, z - 1, r + 1) - x(s, t, z, r), zero.clone()));
        out.push((
            "lrEQ4",
            x(s, t, z, r) + q(t - r + 1) * x(s, t + 1, z - 1, r) - x(s, t, z - 1, r),
            zero.clone(),
        ));
        if r < t {
            out.push((
                "lrEQ5",
                x(s, t, z, r) - x(s, t, z, r + 1) + q(z) * x(s, t + 1, z - 1, r + 1)
                    - q(s) * x(s - 1, t + 1, z, r + 1),
                zero.clone(),
            ));
        }
        if r == t {
            out.push((
                "lrEQ6",
                q(z) * x(s, t + 1, z - 1, t + 1) - q(s) * x(s - 1, t + 1, z, t + 1) + x(s, t, z, t),
                zero.clone(),
            ));
        }
        if r == 1 {
            out.push((
                "lrEQ7",
                q(z) * x(s, t + 1, z - 1, 1) - q(s) * x(s - 1, t + 1, z, 1) - x(s, t, z, 1),
                zero.clone(),
            ));
        }
    }
    out
}

fn show(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact check of all seventeen identities over `0 ≤ s ≤ max_s`,
/// `0 ≤ z ≤ max_z`, `1 ≤ t ≤ max_t` and every valid `r`.
pub fn appendix_suite(max_s: u64, max_t: u64, max_z: u64) -> IdentityReport {
    let mut tuples = Vec::new();
    for s in 0..=max_s {
        for z in 0..=max_z {
            for t in 1..=max_t {
                for r in 1..=t {
                    tuples.push((s, t, z, r));
                }
            }
        }
    }
    let checks = tuples
        .par_iter()
        .flat_map_iter(|&(s, t, z, r)| {
            identities_at(s, t, z, r).into_iter().map(move |(name, lhs, rhs)| IdentityCheck {
                name,
                s,
                t,
                z,
                r,
                pass: lhs == rhs,
                lhs: show(&lhs),
                rhs: show(&rhs),
            })
        })
        .collect();
    IdentityReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    #[test]
    fn xi_values() {
        for t in 1..6 {
            for r in 1..=t {
                assert_eq!(xi(0, t, 0, r).unwrap(), Rational::new(BigInt::one(), factorial(t)));
            }
        }
        for s in 0..5 {
            for t in 1..5 {
                assert_eq!(xi(s, t, 0, t).unwrap(), Rational::new(factorial(s), factorial(s + t)));
            }
        }
        assert_eq!(xi(1, 1, 1, 1).unwrap(), rat(1, 6));
        assert!(xi(0, 2, 0, 3).is_err());
        assert!(xi(0, 2, 0, 0).is_err());
    }

    #[test]
    fn c_matches_signed_xi() {
        for s in 0..=5 {
            for z in 0..=5 {
                for t in 1..=5 {
                    for r in 1..=t {
                        let sign = if (s * z + z) % 2 == 0 { rat(1, 1) } else { rat(-1, 1) };
                        assert_eq!(c_coeff(s, t, z, r).unwrap(), sign * xi(s, t, z, r).unwrap());
                    }
                }
            }
        }
        // (r+z−1)! = 1! here, so the value is 1!·2!/4!
        assert_eq!(c_coeff(1, 2, 1, 1).unwrap(), rat(1, 12));
        assert_eq!(c_coeff(0, 3, 0, 2).unwrap(), rat(1, 6));
    }

    #[test]
    fn zeta_values() {
        for m in 0..5 {
            assert_eq!(zeta(1, 1, 1, 1, m).unwrap(), rat(1, 1));
        }
        assert_eq!(zeta(2, 2, 1, 1, 2).unwrap(), rat(-1, 2));
        for d in 1..4 {
            for l in 1..=d {
                for t in 1..4 {
                    for r in 1..=t {
                        assert!(!zeta(l, d, t, r, 3).unwrap().is_zero());
                    }
                }
            }
        }
        assert!(zeta(0, 1, 1, 1, 1).is_err());
    }

    #[test]
    fn appendix_spot_values() {
        assert_eq!(xi(1, 1, 0, 1).unwrap() - xi(0, 2, 0, 2).unwrap(), rat(0, 1));
        assert_eq!(xi(0, 1, 1, 1).unwrap() - xi(0, 2, 0, 1).unwrap(), rat(0, 1));
        let lr7 = xi(1, 2, 0, 1).unwrap() - xi(0, 2, 1, 1).unwrap() - xi(1, 1, 1, 1).unwrap();
        assert_eq!(lr7, rat(0, 1));
    }

    #[test]
    fn small_suite_passes() {
        let rep = appendix_suite(3, 3, 3);
        assert!(rep.all_pass(), "{:?}", rep.failures());
        assert!(rep.summary().iter().all(|&(_, run, _)| run > 0));
    }
}
