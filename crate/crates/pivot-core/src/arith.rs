//! Exact arithmetic: multidegrees, rational scalars, and sparse multivariate
//! polynomials over the rationals.
//!
//! Every value is exact. Coefficients are arbitrary-precision rationals kept
//! in lowest terms with positive denominator, and exponent vectors have a
//! fixed length agreed on when the ambient variable set is chosen. Operations
//! on multidegrees of different lengths are dimension errors; polynomial
//! operations require equal variable counts and treat a mismatch as a
//! programming bug.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use num_bigint::BigInt;
pub use num_rational::BigRational as Rational;

/// Convenience constructor for an integer rational.
pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Convenience constructor for a ratio of integers.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exponent vector of a monomial over a fixed, ordered variable set.
///
/// The componentwise partial order is divisibility of monomials; the derived
/// total order (lexicographic on exponents) is used only to keep term maps
/// deterministic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multidegree(Vec<u32>);

impl Multidegree {
    pub fn new(exponents: Vec<u32>) -> Self {
        Multidegree(exponents)
    }

    /// The multidegree of the monomial 1 in `nvars` variables.
    pub fn zero(nvars: usize) -> Self {
        Multidegree(vec![0; nvars])
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0[var]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.0.len() == other.0.len() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.0.len(),
                right: other.0.len(),
            })
        }
    }

    /// Componentwise maximum: the multidegree of lcm of the two monomials.
    pub fn lcm(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(Multidegree(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        ))
    }

    /// Whether the monomial with this multidegree divides the other one.
    pub fn divides(&self, other: &Self) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.0.iter().zip(&other.0).all(|(&a, &b)| a <= b))
    }

    /// Componentwise difference `self - divisor`; defined only on divisors.
    pub fn quotient(&self, divisor: &Self) -> Result<Self> {
        self.check_len(divisor)?;
        let mut out = Vec::with_capacity(self.0.len());
        for (position, (&a, &b)) in self.0.iter().zip(&divisor.0).enumerate() {
            if b > a {
                return Err(Error::NotDivisible { position });
            }
            out.push(a - b);
        }
        Ok(Multidegree(out))
    }

    /// Componentwise sum: the multidegree of the product of the monomials.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(Multidegree(
            self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect(),
        ))
    }

    /// Renders the monomial against variable names, e.g. `x^2*y`.
    pub fn format_with(&self, vars: &[String]) -> String {
        debug_assert_eq!(vars.len(), self.0.len());
        let factors: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    vars[i].clone()
                } else {
                    format!("{}^{}", vars[i], e)
                }
            })
            .collect();
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        }
    }
}

impl fmt::Debug for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deg{:?}", self.0)
    }
}

/// Sparse polynomial with rational coefficients over a fixed variable count.
///
/// Terms are kept in a map ordered lexicographically by exponent vector, with
/// no zero coefficients, so equal polynomials have identical representations.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Multidegree, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, value: Rational) -> Self {
        Self::term(Multidegree::zero(nvars), value)
    }

    /// Single term `coefficient * x^degree`; a zero coefficient gives zero.
    pub fn term(degree: Multidegree, coefficient: Rational) -> Self {
        let nvars = degree.nvars();
        let mut terms = BTreeMap::new();
        if !coefficient.is_zero() {
            terms.insert(degree, coefficient);
        }
        Polynomial { nvars, terms }
    }

    /// The variable `var` (0-based) as a polynomial in `nvars` variables.
    pub fn variable(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable index out of range");
        let mut exps = vec![0; nvars];
        exps[var] = 1;
        Self::term(Multidegree::new(exps), Rational::one())
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Multidegree, Rational)>,
    {
        let mut poly = Polynomial::zero(nvars);
        for (degree, coefficient) in terms {
            if degree.nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    left: nvars,
                    right: degree.nvars(),
                });
            }
            poly.add_term(degree, coefficient);
        }
        Ok(poly)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Multidegree, &Rational)> {
        self.terms.iter()
    }

    /// Coefficient of the given multidegree (zero when absent).
    pub fn coefficient(&self, degree: &Multidegree) -> Rational {
        self.terms.get(degree).cloned().unwrap_or_else(Rational::zero)
    }

    /// `Some(c)` when the polynomial is the constant `c` (zero included).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (degree, coefficient) = self.terms.iter().next().unwrap();
                degree.is_zero().then(|| coefficient.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, degree: Multidegree, coefficient: Rational) {
        if coefficient.is_zero() {
            return;
        }
        debug_assert_eq!(degree.nvars(), self.nvars);
        match self.terms.entry(degree) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(coefficient);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += coefficient;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    fn assert_same_vars(&self, other: &Self) {
        assert_eq!(
            self.nvars, other.nvars,
            "polynomials over different variable counts"
        );
    }

    pub fn scaled(&self, scalar: &Rational) -> Self {
        if scalar.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(d, c)| (d.clone(), c * scalar))
                .collect(),
        }
    }

    /// Renders the polynomial against variable names, e.g. `x^2 - 3/2*y`.
    pub fn format_with(&self, vars: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (degree, coefficient) in &self.terms {
            let mono = degree.format_with(vars);
            let abs = if coefficient < &Rational::zero() {
                -coefficient.clone()
            } else {
                coefficient.clone()
            };
            let body = if degree.is_zero() {
                format!("{abs}")
            } else if abs.is_one() {
                mono
            } else {
                format!("{abs}*{mono}")
            };
            if out.is_empty() {
                if coefficient < &Rational::zero() {
                    out.push('-');
                }
                out.push_str(&body);
            } else if coefficient < &Rational::zero() {
                out.push_str(" - ");
                out.push_str(&body);
            } else {
                out.push_str(" + ");
                out.push_str(&body);
            }
        }
        out
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.format_with(&vars))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.assert_same_vars(rhs);
        let mut out = self.clone();
        for (degree, coefficient) in &rhs.terms {
            out.add_term(degree.clone(), coefficient.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.assert_same_vars(rhs);
        let mut out = self.clone();
        for (degree, coefficient) in &rhs.terms {
            out.add_term(degree.clone(), -coefficient.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(d, c)| (d.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.assert_same_vars(rhs);
        let mut out = Polynomial::zero(self.nvars);
        for (da, ca) in &self.terms {
            for (db, cb) in &rhs.terms {
                let degree = da.sum(db).expect("equal variable counts");
                out.add_term(degree, ca * cb);
            }
        }
        out
    }
}
