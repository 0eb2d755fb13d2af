//! Named ring constructions that emit operation tables.

use crate::config::Limits;
use crate::error::{Error, Result};

use super::ring::FiniteCommRing;

/// Integers modulo `n` (`n = 1` is the zero ring).
pub fn zmod(n: usize) -> Result<FiniteCommRing> {
    if n == 0 {
        return Err(Error::Invalid("Z/0 is infinite".into()));
    }
    let labels = (0..n).map(|a| a.to_string()).collect();
    let add = (0..n * n).map(|i| (i / n + i % n) % n).collect();
    let mul = (0..n * n).map(|i| (i / n) * (i % n) % n).collect();
    FiniteCommRing::from_tables(format!("Z/{n}"), labels, add, mul, 0, 1 % n)
}

/// `(Z/n)[t] / (f)` for a monic `f`, given by its coefficients from the
/// constant term up to (excluding) the leading 1.
///
/// `modulus = [0, 0]` gives `(Z/n)[t]/(t^2)`; `modulus = [1, 1]` over `n = 2`
/// gives the field with four elements.
pub fn poly_quotient(n: usize, modulus: &[usize], var: &str, limits: &Limits) -> Result<FiniteCommRing> {
    if n == 0 {
        return Err(Error::Invalid("coefficient ring Z/0 is infinite".into()));
    }
    let d = modulus.len();
    if d == 0 {
        return Err(Error::Invalid("modulus must have positive degree".into()));
    }
    let size = n
        .checked_pow(d as u32)
        .ok_or_else(|| Error::cap("polynomial quotient carrier", limits.carrier_cap, usize::MAX))?;
    limits.check_carrier("polynomial quotient", size)?;
    let f: Vec<usize> = modulus.iter().map(|c| c % n).collect();
    let decode = |mut x: usize| -> Vec<usize> {
        (0..d)
            .map(|_| {
                let c = x % n;
                x /= n;
                c
            })
            .collect()
    };
    let encode = |c: &[usize]| -> usize { c.iter().rev().fold(0, |acc, &x| acc * n + x) };
    let polymul = |a: &[usize], b: &[usize]| -> Vec<usize> {
        let mut prod = vec![0usize; 2 * d];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % n;
            }
        }
        // t^d = -(f_0 + f_1 t + ... + f_{d-1} t^{d-1})
        for k in (d..2 * d).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &fi) in f.iter().enumerate() {
                let sub = c * fi % n;
                prod[k - d + i] = (prod[k - d + i] + n - sub) % n;
            }
        }
        prod.truncate(d);
        prod
    };
    let polys: Vec<Vec<usize>> = (0..size).map(decode).collect();
    let mut add = Vec::with_capacity(size * size);
    let mut mul = Vec::with_capacity(size * size);
    for a in &polys {
        for b in &polys {
            let s: Vec<usize> = a.iter().zip(b).map(|(x, y)| (x + y) % n).collect();
            add.push(encode(&s));
            mul.push(encode(&polymul(a, b)));
        }
    }
    let labels = polys.iter().map(|p| poly_label(p, var)).collect();
    let one = if n == 1 { 0 } else { 1 };
    let name = format!("Z/{n}[{var}]/({})", poly_label(&monic(&f), var));
    FiniteCommRing::from_tables(name, labels, add, mul, 0, one)
}

/// `(Z/n)[t]/(t^k)`.
pub fn truncated_poly(n: usize, k: usize, limits: &Limits) -> Result<FiniteCommRing> {
    poly_quotient(n, &vec![0; k], "t", limits)
}

/// Cartesian product of rings with componentwise operations.
pub fn product(factors: &[&FiniteCommRing], limits: &Limits) -> Result<FiniteCommRing> {
    if factors.is_empty() {
        // The empty product is the zero ring.
        return zmod(1);
    }
    let size = factors
        .iter()
        .try_fold(1usize, |acc, r| acc.checked_mul(r.size()))
        .unwrap_or(usize::MAX);
    limits.check_carrier("product ring", size)?;
    let decode = |mut x: usize| -> Vec<usize> {
        let mut out = vec![0; factors.len()];
        for (i, r) in factors.iter().enumerate().rev() {
            out[i] = x % r.size();
            x /= r.size();
        }
        out
    };
    let encode = |c: &[usize]| -> usize {
        c.iter()
            .zip(factors)
            .fold(0, |acc, (&x, r)| acc * r.size() + x)
    };
    let tuples: Vec<Vec<usize>> = (0..size).map(decode).collect();
    let mut add = Vec::with_capacity(size * size);
    let mut mul = Vec::with_capacity(size * size);
    for a in &tuples {
        for b in &tuples {
            let s: Vec<usize> = (0..factors.len()).map(|i| factors[i].add(a[i], b[i])).collect();
            let p: Vec<usize> = (0..factors.len()).map(|i| factors[i].mul(a[i], b[i])).collect();
            add.push(encode(&s));
            mul.push(encode(&p));
        }
    }
    let labels = tuples
        .iter()
        .map(|t| {
            let parts: Vec<&str> = t.iter().zip(factors).map(|(&x, r)| r.label(x)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let zero = encode(&factors.iter().map(|r| r.zero()).collect::<Vec<_>>());
    let one = encode(&factors.iter().map(|r| r.one()).collect::<Vec<_>>());
    let name = factors.iter().map(|r| r.name().to_string()).collect::<Vec<_>>().join(" x ");
    FiniteCommRing::from_tables(name, labels, add, mul, zero, one)
}

fn monic(f: &[usize]) -> Vec<usize> {
    let mut m = f.to_vec();
    m.push(1);
    m
}

fn poly_label(coeffs: &[usize], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        terms.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z4_tables_are_a_ring() {
        assert!(zmod(4).unwrap().validate().passed());
    }

    #[test]
    fn injected_product_is_caught_with_witness() {
        let r = zmod(4).unwrap();
        let mut mul: Vec<usize> = (0..16).map(|i| r.mul(i / 4, i % 4)).collect();
        mul[2 * 4 + 3] = 1;
        let add: Vec<usize> = (0..16).map(|i| r.add(i / 4, i % 4)).collect();
        let broken =
            FiniteCommRing::from_tables("bad", r.labels().to_vec(), add, mul, 0, 1).unwrap();
        let report = broken.validate();
        assert!(!report.passed());
        assert_eq!(
            report.violation("multiplicative_commutativity").unwrap().witness,
            vec![2, 3]
        );
    }

    #[test]
    fn f2_t_mod_t2_by_hand() {
        // Basis 1, t with t^2 = 0; element id = c0 + 2 c1.
        let labels = vec!["0".into(), "1".into(), "t".into(), "1+t".into()];
        let add = (0..16).map(|i| (i / 4) ^ (i % 4)).collect();
        let mul = (0..16)
            .map(|i| {
                let (a, b) = (i / 4, i % 4);
                let (a0, a1, b0, b1) = (a & 1, a >> 1, b & 1, b >> 1);
                (a0 & b0) | (((a0 & b1) ^ (a1 & b0)) << 1)
            })
            .collect();
        let hand = FiniteCommRing::from_tables("hand", labels, add, mul, 0, 1).unwrap();
        assert!(hand.validate().passed());
        let built = truncated_poly(2, 2, &Limits::default()).unwrap();
        assert!(hand.same_structure(&built));
        assert_eq!(built.labels(), hand.labels());
    }

    #[test]
    fn f4_is_a_field() {
        let f4 = poly_quotient(2, &[1, 1], "w", &Limits::default()).unwrap();
        assert!(f4.validate().passed());
        assert_eq!(f4.units().len(), 3);
    }

    #[test]
    fn zero_ring_is_legal() {
        let z = zmod(1).unwrap();
        assert!(z.is_zero_ring());
        assert!(z.validate().passed());
    }

    #[test]
    fn carrier_cap_is_enforced() {
        let limits = Limits {
            carrier_cap: 16,
            ..Limits::default()
        };
        let err = truncated_poly(2, 5, &limits).unwrap_err();
        assert!(matches!(err, Error::ResourceCap { .. }));
    }

    #[test]
    fn product_is_componentwise() {
        let f2 = zmod(2).unwrap();
        let z3 = zmod(3).unwrap();
        let p = product(&[&f2, &z3], &Limits::default()).unwrap();
        assert_eq!(p.size(), 6);
        assert!(p.validate().passed());
        assert_eq!(p.label(p.one()), "(1,1)");
    }
}
