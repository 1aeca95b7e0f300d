//! Parameters of the logarithmic-size improvement analysis and the
//! inequalities they must satisfy.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::interval::{decide_le, decide_lt, Interval};
use crate::error::{Error, Result};
use crate::scalar::{rational_serde, Rational};

/// First precision tried when deciding a condition, in bits.
pub const START_BITS: u32 = 64;
/// Precision at which an undecided condition becomes an error.
pub const MAX_BITS: u32 = 8192;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisParams {
    #[serde(with = "rational_serde")]
    pub delta: Rational,
    #[serde(with = "rational_serde")]
    pub eps_tilde: Rational,
    #[serde(with = "rational_serde")]
    pub eps_prime: Rational,
    /// `200000/δ³ + 1`, kept exact. It need not be an integer; the degree
    /// conditions are evaluated at this real value, which implies them for
    /// every integer `d` above it.
    #[serde(with = "rational_serde")]
    pub d_delta: Rational,
    /// Set when any derived value was overridden.
    pub custom: bool,
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

impl AnalysisParams {
    pub fn new(delta: Rational) -> Result<Self> {
        if !(delta > Rational::zero() && delta < Rational::one()) {
            return Err(Error::Contract("delta must lie strictly between 0 and 1".into()));
        }
        let cube = &delta * &delta * &delta;
        Ok(AnalysisParams {
            eps_tilde: &delta / q(2, 1),
            eps_prime: &delta * &delta / q(2500, 1),
            d_delta: q(200_000, 1) / cube + Rational::one(),
            delta,
            custom: false,
        })
    }

    pub fn with_eps_prime(mut self, eps_prime: Rational) -> Self {
        self.eps_prime = eps_prime;
        self.custom = true;
        self
    }

    pub fn with_eps_tilde(mut self, eps_tilde: Rational) -> Self {
        self.eps_tilde = eps_tilde;
        self.custom = true;
        self
    }

    pub fn with_d_delta(mut self, d_delta: Rational) -> Self {
        self.d_delta = d_delta;
        self.custom = true;
        self
    }

    /// Smallest integer degree bound at which the analysis applies.
    pub fn min_claw_bound(&self) -> BigInt {
        self.d_delta.ceil().to_integer()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantCheck {
    pub name: &'static str,
    pub statement: &'static str,
    pub holds: bool,
    /// Precision at which the outcome was decided.
    pub bits: u32,
}

type Condition = fn(&Env) -> Option<bool>;

/// Interval values of all quantities at one precision.
struct Env {
    delta: Interval,
    eps_tilde: Interval,
    eps_prime: Interval,
    d: Interval,
    root_ep: Interval,
    root_2ep: Interval,
    /// `1 − √(2ε′)`.
    gap: Interval,
}

impl Env {
    fn new(p: &AnalysisParams, bits: u32) -> Self {
        let root_2ep = Interval::sqrt(&(&p.eps_prime * q(2, 1)), bits);
        Env {
            delta: Interval::point(p.delta.clone()),
            eps_tilde: Interval::point(p.eps_tilde.clone()),
            eps_prime: Interval::point(p.eps_prime.clone()),
            d: Interval::point(p.d_delta.clone()),
            root_ep: Interval::sqrt(&p.eps_prime, bits),
            gap: &Interval::int(1) - &root_2ep,
            root_2ep,
        }
    }
}

fn iv(n: i64, d: i64) -> Interval {
    Interval::point(q(n, d))
}

// Each condition returns `None` when it is undecided at this precision,
// including divisions by an interval that straddles zero.
const CONDITIONS: [(&str, &str, Condition); 14] = [
    ("eps_tilde_range", "0 < ε̃ < min{2δ, 1/2}", |e| {
        let two_delta = &iv(2, 1) * &e.delta;
        let bound = if decide_le(&two_delta, &iv(1, 2))? { two_delta } else { iv(1, 2) };
        Some(decide_lt(&iv(0, 1), &e.eps_tilde)? && decide_lt(&e.eps_tilde, &bound)?)
    }),
    ("eps_prime_range", "0 < ε′ ≤ 1/20", |e| {
        Some(decide_lt(&iv(0, 1), &e.eps_prime)? && decide_le(&e.eps_prime, &iv(1, 20))?)
    }),
    ("double_margin", "½(1 − ε′ − (15/4)√(2ε′))(1 − √(2ε′)) ≥ ε′/10", |e| {
        let inner = &(&iv(1, 1) - &e.eps_prime) - &(&iv(15, 4) * &e.root_2ep);
        let lhs = &(&iv(1, 2) * &inner) * &e.gap;
        decide_le(&(&e.eps_prime * &iv(1, 10)), &lhs)
    }),
    ("single_margin", "(1 − √ε′)/2 ≥ ε′/10", |e| {
        let lhs = &(&iv(1, 1) - &e.root_ep) * &iv(1, 2);
        decide_le(&(&e.eps_prime * &iv(1, 10)), &lhs)
    }),
    ("good_margin", "2 + ε′ − 1/(1 − √(2ε′)) ≥ √(2ε′)", |e| {
        let lhs = &(&iv(2, 1) + &e.eps_prime) - &iv(1, 1).div(&e.gap)?;
        decide_le(&e.root_2ep, &lhs)
    }),
    (
        "loss_budget",
        "4√ε′ + (4√(2ε′) + 8ε′)/(1 − √(2ε′))² + 18ε′/(1 − √(2ε′))⁴ < ε̃/2",
        |e| {
            let a = &iv(4, 1) * &e.root_ep;
            let b = (&(&iv(4, 1) * &e.root_2ep) + &(&iv(8, 1) * &e.eps_prime)).div(&e.gap.powi(2))?;
            let c = (&iv(18, 1) * &e.eps_prime).div(&e.gap.powi(4))?;
            decide_lt(&(&(&a + &b) + &c), &(&e.eps_tilde * &iv(1, 2)))
        },
    ),
    ("degree_budget", "20/((d − 1)ε′) + ε̃/2 ≤ δ/2 at d = d_δ", |e| {
        let lhs = &iv(20, 1).div(&(&(&e.d - &iv(1, 1)) * &e.eps_prime))? + &(&e.eps_tilde * &iv(1, 2));
        decide_le(&lhs, &(&e.delta * &iv(1, 2)))
    }),
    ("half_gap", "1/2 < 1 − √(2ε′)", |e| decide_lt(&iv(1, 2), &e.gap)),
    ("degree_vs_eps_tilde", "1 < (d − 1)ε̃/4 at d = d_δ", |e| {
        let rhs = &(&(&e.d - &iv(1, 1)) * &iv(1, 4)) * &e.eps_tilde;
        decide_lt(&iv(1, 1), &rhs)
    }),
    ("degree_gap_ratio", "4(1 − √(2ε′))⁻²/(d − 5) < 1/2 at d = d_δ", |e| {
        let lhs = iv(4, 1).div(&(&e.gap.powi(2) * &(&e.d - &iv(5, 1))))?;
        decide_lt(&lhs, &iv(1, 2))
    }),
    ("eps_prime_vs_gap", "ε′ ≤ (1 − √(2ε′))²", |e| decide_le(&e.eps_prime, &e.gap.powi(2))),
    ("degree_ratio", "(d − 1)/(d − 5) < 2 at d = d_δ", |e| {
        let lhs = (&e.d - &iv(1, 1)).div(&(&e.d - &iv(5, 1)))?;
        decide_lt(&lhs, &iv(2, 1))
    }),
    ("degree_floor", "9 < d at d = d_δ", |e| decide_lt(&iv(9, 1), &e.d)),
    ("root_vs_eps_tilde", "8√ε′ ≤ ε̃", |e| decide_le(&(&iv(8, 1) * &e.root_ep), &e.eps_tilde)),
];

/// Evaluates every condition, doubling the precision for the undecided
/// ones until [`MAX_BITS`].
pub fn check_constants(params: &AnalysisParams) -> Result<Vec<ConstantCheck>> {
    let mut out: Vec<Option<ConstantCheck>> = vec![None; CONDITIONS.len()];
    let mut bits = START_BITS;
    loop {
        let env = Env::new(params, bits);
        for (slot, (name, statement, cond)) in out.iter_mut().zip(CONDITIONS.iter()) {
            if slot.is_none() {
                if let Some(holds) = cond(&env) {
                    *slot = Some(ConstantCheck { name, statement, holds, bits });
                }
            }
        }
        if let Some(i) = out.iter().position(Option::is_none) {
            if bits >= MAX_BITS {
                return Err(Error::Undecidable { what: CONDITIONS[i].0.into(), bits });
            }
            bits *= 2;
        } else {
            return Ok(out.into_iter().map(Option::unwrap).collect());
        }
    }
}
