//! Scalar and vector helpers over arbitrary-precision integers and rationals.

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

/// Dense integer vector. All lattice data in this crate uses this alias.
pub type IntVec = Vec<Int>;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn vec_i64(v: &[i64]) -> IntVec {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn vec_add(a: &[Int], b: &[Int]) -> IntVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Int], b: &[Int]) -> IntVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_neg(a: &[Int]) -> IntVec {
    a.iter().map(|x| -x).collect()
}

pub fn vec_scale(c: &Int, a: &[Int]) -> IntVec {
    a.iter().map(|x| c * x).collect()
}

pub fn is_zero_vec(a: &[Int]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Gcd of all entries; zero for the zero vector.
pub fn content(a: &[Int]) -> Int {
    a.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Divides out the content, leaving the sign pattern intact.
/// The zero vector is returned unchanged.
pub fn primitive(a: &[Int]) -> IntVec {
    let c = content(a);
    if c.is_zero() || c.is_one() {
        return a.to_vec();
    }
    a.iter().map(|x| x / &c).collect()
}

/// Lexicographic comparison on entries, used for all canonical orderings.
pub fn lex_cmp(a: &[Int], b: &[Int]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Flips sign so the first nonzero entry is positive. Canonical for ± pairs.
pub fn sign_normalize(a: &[Int]) -> IntVec {
    match a.iter().find(|x| !x.is_zero()) {
        Some(x) if x.sign() == Sign::Minus => vec_neg(a),
        _ => a.to_vec(),
    }
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Least common multiple of the denominators of a rational vector.
pub fn denom_lcm(v: &[Rat]) -> Int {
    v.iter().fold(Int::one(), |l, r| l.lcm(r.denom()))
}

/// Clears denominators: multiplies by the denominator lcm and returns integers.
pub fn clear_denoms(v: &[Rat]) -> IntVec {
    let l = denom_lcm(v);
    v.iter()
        .map(|r| {
            let scaled = r * Rat::from(l.clone());
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        })
        .collect()
}

/// Ceiling of the rational a/b for b > 0.
pub fn ceil_div(a: &Int, b: &Int) -> Int {
    debug_assert!(b.is_positive());
    num::Integer::div_ceil(a, b)
}

pub fn fmt_vec(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_and_sign() {
        assert_eq!(primitive(&vec_i64(&[2, -4, 6])), vec_i64(&[1, -2, 3]));
        assert_eq!(primitive(&vec_i64(&[0, 0])), vec_i64(&[0, 0]));
        assert_eq!(sign_normalize(&vec_i64(&[0, -2, 1])), vec_i64(&[0, 2, -1]));
        assert_eq!(sign_normalize(&vec_i64(&[0, 2, -1])), vec_i64(&[0, 2, -1]));
    }

    #[test]
    fn denom_clearing() {
        let v = vec![rat(1, 2), rat(-3, 4), rat(2, 1)];
        assert_eq!(clear_denoms(&v), vec_i64(&[2, -3, 8]));
    }

    #[test]
    fn ceil_division() {
        assert_eq!(ceil_div(&int(5), &int(2)), int(3));
        assert_eq!(ceil_div(&int(-5), &int(2)), int(-2));
        assert_eq!(ceil_div(&int(4), &int(2)), int(2));
    }
}
