//! Integer Laurent polynomials in the variable `q`.
//!
//! Exponents are stored in half-units (the key `k` stands for `q^{k/2}`): a
//! determinant cross-check needs evaluation on two-component links, whose
//! normalized polynomials live in `q^{1/2} Z[q, q^{-1}]`. Knots always have
//! integer `q`-exponents and render as plain powers.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPolynomial {
    /// exponent in q^{1/2} units -> coefficient; zero coefficients are never stored
    half_coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial_q(0, BigInt::from(1))
    }

    /// `coeff * q^exp` for an integer exponent.
    pub fn monomial_q(exp: i64, coeff: BigInt) -> Self {
        Self::monomial_half(exp * 2, coeff)
    }

    /// `coeff * q^{half/2}`.
    pub fn monomial_half(half: i64, coeff: BigInt) -> Self {
        let mut p = Self::default();
        p.add_term_half(half, coeff);
        p
    }

    pub fn from_q_terms<I: IntoIterator<Item = (i64, BigInt)>>(terms: I) -> Self {
        let mut p = Self::default();
        for (e, c) in terms {
            p.add_term_half(e * 2, c);
        }
        p
    }

    pub fn add_term_half(&mut self, half: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.half_coeffs.entry(half).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.half_coeffs.remove(&half);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.half_coeffs.is_empty()
    }

    /// True when every exponent is an integer power of `q`.
    pub fn has_integer_exponents(&self) -> bool {
        self.half_coeffs.keys().all(|k| k % 2 == 0)
    }

    pub fn coeff_q(&self, exp: i64) -> BigInt {
        self.half_coeffs.get(&(exp * 2)).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Terms as (half-exponent, coefficient), ascending.
    pub fn terms_half(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.half_coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.terms_half() {
            out.add_term_half(k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::default();
        for (k, c) in self.terms_half() {
            out.add_term_half(k, -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (k1, c1) in self.terms_half() {
            for (k2, c2) in other.terms_half() {
                out.add_term_half(k1 + k2, c1 * c2);
            }
        }
        out
    }

    /// Substitution `q -> q^{-1}`.
    pub fn invert_variable(&self) -> Self {
        let mut out = Self::default();
        for (k, c) in self.terms_half() {
            out.add_term_half(-k, c.clone());
        }
        out
    }

    /// Sum of absolute values of all coefficients.
    pub fn coeff_abs_sum(&self) -> BigInt {
        self.half_coeffs.values().map(|c| c.abs()).sum()
    }

    /// `|p(-1)|`, evaluated exactly in Z[i] via `q^{1/2} = i` so that
    /// half-integer exponents (even-component links) are meaningful. For any
    /// normalized link polynomial the value is real or purely imaginary; the
    /// returned magnitude is branch-independent.
    pub fn abs_at_minus_one(&self) -> BigInt {
        let mut re = BigInt::zero();
        let mut im = BigInt::zero();
        for (k, c) in self.terms_half() {
            match k.rem_euclid(4) {
                0 => re += c,
                1 => im += c,
                2 => re -= c,
                _ => im -= c,
            }
        }
        debug_assert!(
            re.is_zero() || im.is_zero(),
            "evaluation of a link polynomial at -1 must be real or imaginary"
        );
        re.abs() + im.abs()
    }

    /// JSON object form: q-exponent (as decimal string, halves as `k/2`) -> coefficient.
    pub fn to_json_map(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        for (k, c) in self.terms_half() {
            let key = if k % 2 == 0 { format!("{}", k / 2) } else { format!("{k}/2") };
            m.insert(key, c.to_string());
        }
        m
    }

    pub fn from_json_map(map: &BTreeMap<String, i64>) -> Result<Self, String> {
        let mut p = Self::default();
        for (key, &c) in map {
            let half = if let Some(num) = key.strip_suffix("/2") {
                num.parse::<i64>().map_err(|e| format!("bad exponent {key:?}: {e}"))?
            } else {
                let e: i64 = key.parse().map_err(|e| format!("bad exponent {key:?}: {e}"))?;
                e * 2
            };
            p.add_term_half(half, BigInt::from(c));
        }
        Ok(p)
    }
}

impl fmt::Display for LaurentPolynomial {
    /// Renders in descending powers, e.g. `-q+2-q^-1+2q^-2-q^-3+q^-4-q^-5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.half_coeffs.iter().rev() {
            let (sign, mag) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, "{sign}")?;
            }
            let is_one = mag == BigInt::from(1);
            match (*k, is_one) {
                (0, _) => write!(f, "{mag}")?,
                (2, true) => write!(f, "q")?,
                (2, false) => write!(f, "{mag}q")?,
                (k, true) if k % 2 == 0 => write!(f, "q^{}", k / 2)?,
                (k, false) if k % 2 == 0 => write!(f, "{mag}q^{}", k / 2)?,
                (k, true) => write!(f, "q^{k}/2")?,
                (k, false) => write!(f, "{mag}q^{k}/2")?,
            }
        }
        Ok(())
    }
}
