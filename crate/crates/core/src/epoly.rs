//! Finite exponential sums `f(t) = Σ c(λ) e^{iλt}` with Gaussian-rational
//! coefficients, and exact Besicovitch `B²` / `B⁴` norm powers.
//!
//! Averaging `e^{iat}` over `[-T, T]` tends to 1 when `a = 0` and to 0
//! otherwise, so `‖f‖₂²` is `Σ |c(λ)|²` and `‖f‖₄⁴` keeps only the quadruples
//! with `λ1 + λ2 = λ3 + λ4`. Both are evaluated here without quadrature.

use std::collections::{BTreeMap, HashMap};

use num::{Complex, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::sets::FiniteSet;

pub type Gaussian = Complex<Rational>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "EPolyWire", into = "EPolyWire")]
pub struct EPolynomial {
    terms: BTreeMap<Rational, Gaussian>,
}

#[derive(Serialize, Deserialize)]
struct TermWire {
    #[serde(with = "rational::serde_str")]
    freq: Rational,
    #[serde(with = "rational::serde_str")]
    re: Rational,
    #[serde(with = "rational::serde_str")]
    im: Rational,
}

#[derive(Serialize, Deserialize)]
struct EPolyWire {
    terms: Vec<TermWire>,
}

impl TryFrom<EPolyWire> for EPolynomial {
    type Error = Error;

    fn try_from(w: EPolyWire) -> Result<Self> {
        Ok(EPolynomial::from_terms(w.terms.into_iter().map(|t| (t.freq, Complex::new(t.re, t.im)))))
    }
}

impl From<EPolynomial> for EPolyWire {
    fn from(p: EPolynomial) -> Self {
        EPolyWire { terms: p.terms.into_iter().map(|(freq, c)| TermWire { freq, re: c.re, im: c.im }).collect() }
    }
}

impl EPolynomial {
    /// Builds a polynomial, adding coefficients of repeated frequencies and
    /// dropping zero terms.
    pub fn from_terms<I: IntoIterator<Item = (Rational, Gaussian)>>(terms: I) -> Self {
        let mut map: BTreeMap<Rational, Gaussian> = BTreeMap::new();
        for (freq, c) in terms {
            let slot = map.entry(freq).or_insert_with(Gaussian::zero);
            *slot = &*slot + c;
        }
        map.retain(|_, c| !c.is_zero());
        EPolynomial { terms: map }
    }

    /// Unit coefficients on every frequency of `support`.
    pub fn unit(support: &FiniteSet) -> Self {
        Self::from_terms(support.iter().map(|f| (f.clone(), Complex::new(rational::int(1), rational::int(0)))))
    }

    pub fn support(&self) -> FiniteSet {
        self.terms.keys().cloned().collect()
    }

    pub fn coefficient(&self, freq: &Rational) -> Option<&Gaussian> {
        self.terms.get(freq)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Gaussian)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `‖f‖_{B²}² = Σ |c(λ)|²`.
pub fn bnorm2_sq(f: &EPolynomial) -> Rational {
    f.terms.values().map(|c| c.norm_sqr()).fold(Rational::zero(), |a, b| a + b)
}

/// `Σ |c(λ)|⁴`, the diagonal correction in the Sidon norm identity.
pub fn sum_abs_pow4(f: &EPolynomial) -> Rational {
    f.terms
        .values()
        .map(|c| {
            let n = c.norm_sqr();
            &n * &n
        })
        .fold(Rational::zero(), |a, b| a + b)
}

/// `‖f‖_{B⁴}⁴ = Σ_{λ1+λ2=λ3+λ4} c(λ1) c(λ2) conj(c(λ3)) conj(c(λ4))`.
///
/// Grouping by `s = λ1 + λ2` gives `Σ_s P(s) conj(P(s))` with
/// `P(s) = Σ_{λ1+λ2=s} c(λ1) c(λ2)`; the imaginary part must vanish.
pub fn bnorm4_pow4(f: &EPolynomial) -> Rational {
    let n = f.terms.len();
    let mut by_sum: HashMap<Rational, Gaussian> = HashMap::with_capacity(n * n);
    for (l1, c1) in &f.terms {
        for (l2, c2) in &f.terms {
            let slot = by_sum.entry(l1 + l2).or_insert_with(Gaussian::zero);
            *slot = &*slot + c1 * c2;
        }
    }
    let total = by_sum.values().map(|p| p * p.conj()).fold(Gaussian::zero(), |a, b| a + b);
    assert!(total.im.is_zero(), "fourth-power norm has a nonzero imaginary part");
    total.re
}

/// The upper bound `2 ‖f‖₂⁴ − Σ|c|⁴`, attained exactly on Sidon supports.
pub fn sidon_bound_pow4(f: &EPolynomial) -> Rational {
    let b2 = bnorm2_sq(f);
    rational::int(2) * &b2 * &b2 - sum_abs_pow4(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn norm_examples() {
        let sidon = EPolynomial::unit(&FiniteSet::from_ints(&[0, 1, 3, 7]));
        assert_eq!(bnorm2_sq(&sidon), int(4));
        assert_eq!(bnorm4_pow4(&sidon), int(28));
        assert_eq!(sidon_bound_pow4(&sidon), int(28));

        let ap = EPolynomial::unit(&FiniteSet::from_ints(&[1, 2, 3]));
        assert_eq!(bnorm4_pow4(&ap), int(19));

        let empty = EPolynomial::default();
        assert_eq!(bnorm2_sq(&empty), int(0));
        assert_eq!(bnorm4_pow4(&empty), int(0));

        let half = EPolynomial::from_terms([(int(0), Complex::new(ratio(1, 2), ratio(1, 2)))]);
        assert_eq!(bnorm2_sq(&half), ratio(1, 2));

        let single = EPolynomial::from_terms([(int(3), Complex::new(int(1), int(0)))]);
        assert_eq!(bnorm4_pow4(&single), int(1));
    }

    #[test]
    fn repeated_frequencies_merge() {
        let p = EPolynomial::from_terms([
            (int(1), Complex::new(int(1), int(0))),
            (int(1), Complex::new(int(-1), int(0))),
            (int(2), Complex::new(int(0), int(1))),
        ]);
        assert_eq!(p.len(), 1);
        assert!(p.coefficient(&int(1)).is_none());
    }

    #[test]
    fn json_form() {
        let json = r#"{"terms":[{"freq":"1/2","re":"1","im":"-1/3"},{"freq":"0","re":"0","im":"0"}]}"#;
        let p: EPolynomial = serde_json::from_str(json).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"terms":[{"freq":"1/2","re":"1","im":"-1/3"}]}"#);
    }
}
