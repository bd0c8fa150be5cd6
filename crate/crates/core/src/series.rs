//! Truncated power and Laurent series in one variable with exact rational
//! coefficients.
//!
//! A [`TruncSeries`] stores the coefficients of `t^low, ..., t^(order-1)`.
//! Everything at exponent `order` or above is *unknown*, not zero, and every
//! operation propagates the window honestly: a result only claims the
//! exponents its inputs actually determine. Operations whose answer would
//! depend on unknown coefficients return an error instead.
//!
//! Values are kept canonical (leading zeros stripped, so `low` is the
//! valuation or `order` for the zero series), which makes derived equality
//! meaningful.

use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// One branch's truncated series `sum c_e t^e + O(t^order)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    low: i64,
    order: i64,
    coeffs: Vec<Rational>,
}

/// A series read as the coefficient stream of a differential `f(t) dt`.
pub type MeroSeries = TruncSeries;

fn zero_ref() -> &'static Rational {
    static ZERO: OnceLock<Rational> = OnceLock::new();
    ZERO.get_or_init(Rational::zero)
}

/// Dense product of two coefficient arrays, keeping indices `< len`.
fn convolve(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Inverse of a unit power series given densely (`a[0] != 0`), to `len` terms.
fn dense_reciprocal(a: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    if len == 0 {
        return out;
    }
    let inv0 = a[0].recip();
    out[0] = inv0.clone();
    for n in 1..len {
        let mut acc = Rational::zero();
        for k in 1..=n.min(a.len().saturating_sub(1)) {
            if !a[k].is_zero() {
                acc += &a[k] * &out[n - k];
            }
        }
        out[n] = -(acc * &inv0);
    }
    out
}

fn dense_pow(a: &[Rational], n: u64, len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    if len == 0 {
        return out;
    }
    out[0] = Rational::one();
    for _ in 0..n {
        out = convolve(&out, a, len);
    }
    out
}

impl TruncSeries {
    fn canonical(mut low: i64, order: i64, mut coeffs: Vec<Rational>) -> Self {
        let window = (order - low).max(0) as usize;
        coeffs.resize(window, Rational::zero());
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        coeffs.drain(..lead);
        low += lead as i64;
        if coeffs.is_empty() {
            low = order;
        }
        Self { low, order, coeffs }
    }

    /// `O(t^order)`.
    pub fn zero(order: i64) -> Self {
        Self {
            low: order,
            order,
            coeffs: Vec::new(),
        }
    }

    pub fn one(order: i64) -> Self {
        Self::monomial(0, Rational::one(), order)
    }

    /// `coeff * t^exp + O(t^order)`; the zero series if `exp >= order`.
    pub fn monomial(exp: i64, coeff: Rational, order: i64) -> Self {
        if exp >= order {
            return Self::zero(order);
        }
        Self::canonical(exp, order, vec![coeff])
    }

    /// Builds a series from `(exponent, coefficient)` terms, summing repeats.
    /// Terms at or above `order` fall in the unknown region and are dropped.
    pub fn from_terms<I>(order: i64, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        let kept: Vec<(i64, Rational)> = terms.into_iter().filter(|(e, _)| *e < order).collect();
        let Some(low) = kept.iter().map(|(e, _)| *e).min() else {
            return Self::zero(order);
        };
        let mut coeffs = vec![Rational::zero(); (order - low) as usize];
        for (e, c) in kept {
            coeffs[(e - low) as usize] += c;
        }
        Self::canonical(low, order, coeffs)
    }

    /// Dense constructor: `coeffs[k]` is the coefficient of `t^(low + k)`.
    /// Missing trailing entries are zero; entries past `order` are dropped.
    pub fn from_coeffs(low: i64, coeffs: Vec<Rational>, order: i64) -> Self {
        if low >= order {
            return Self::zero(order);
        }
        Self::canonical(low, order, coeffs)
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// Lowest stored exponent: the valuation, or `order` for the zero series.
    pub fn low(&self) -> i64 {
        self.low
    }

    /// Smallest exponent with a nonzero coefficient; `None` stands for `+inf`
    /// (all tracked coefficients vanish).
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.low)
        }
    }

    /// Valuation, with the zero series counted at its truncation order.
    fn effective_valuation(&self) -> i64 {
        self.low
    }

    pub fn pole_order(&self) -> u64 {
        match self.valuation() {
            Some(v) if v < 0 => (-v) as u64,
            _ => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^exp`, or `None` when `exp` lies in the unknown region.
    pub fn coeff(&self, exp: i64) -> Option<&Rational> {
        if exp >= self.order {
            None
        } else if exp < self.low {
            Some(zero_ref())
        } else {
            Some(&self.coeffs[(exp - self.low) as usize])
        }
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.low + k as i64, c))
    }

    /// Dense coefficients of `t^from, ..., t^(to-1)`; `to` must not exceed `order`.
    fn dense(&self, from: i64, to: i64) -> Vec<Rational> {
        debug_assert!(to <= self.order);
        (from..to)
            .map(|e| self.coeff(e).cloned().unwrap_or_else(Rational::zero))
            .collect()
    }

    /// Forgets everything at or above `order` (no-op if already coarser).
    pub fn truncated(&self, order: i64) -> Self {
        if order >= self.order {
            return self.clone();
        }
        let low = self.low.min(order);
        Self::canonical(low, order, self.dense(low, order))
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::TruncationMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    fn add_general(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let low = self.low.min(other.low).min(order);
        let coeffs = (low..order)
            .map(|e| {
                let a = self.coeff(e).expect("below order");
                let b = other.coeff(e).expect("below order");
                a + b
            })
            .collect();
        Self::canonical(low, order, coeffs)
    }

    /// Product with the window each factor actually determines: unknown
    /// coefficients of one factor first meet the other at
    /// `order + valuation(other)`.
    fn mul_general(&self, other: &Self) -> Self {
        let order = (self.order + other.effective_valuation())
            .min(other.order + self.effective_valuation());
        if self.is_zero() || other.is_zero() {
            return Self::zero(order);
        }
        let low = self.low + other.low;
        if low >= order {
            return Self::zero(order);
        }
        let len = (order - low) as usize;
        let coeffs = convolve(&self.coeffs, &other.coeffs, len);
        Self::canonical(low, order, coeffs)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self.add_general(other))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self.add_general(&other.neg()))
    }

    pub fn neg(&self) -> Self {
        Self {
            low: self.low,
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.order);
        }
        Self {
            low: self.low,
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Product truncated at the common order. Laurent factors shrink the
    /// window: `t^-3 * O(t^6)` is only known below `t^3`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self.mul_general(other).truncated(self.order))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.order);
        for _ in 0..n {
            acc = acc.mul_general(self).truncated(self.order);
        }
        acc
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            low: self.low + k,
            order: self.order + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Formal derivative `d/dt`.
    pub fn derivative(&self) -> Self {
        let terms: Vec<(i64, Rational)> = self
            .terms()
            .filter(|(e, _)| *e != 0)
            .map(|(e, c)| (e - 1, c * Rational::from_integer(e.into())))
            .collect();
        Self::from_terms(self.order - 1, terms)
    }

    /// Multiplicative inverse of a nonzero series.
    pub fn reciprocal(&self) -> Result<Self> {
        let Some(v) = self.valuation() else {
            return Err(Error::InvalidSubstitution(
                "cannot invert a series with no known nonzero coefficient".into(),
            ));
        };
        // self = t^v * g with g a unit known below order - v
        let len = (self.order - v) as usize;
        let inv = dense_reciprocal(&self.coeffs, len);
        // 1/self = t^-v / g, known below order - 2v
        Ok(Self::canonical(-v, self.order - 2 * v, inv))
    }

    fn constant_is_free(&self) -> Result<()> {
        if self.order < 1 {
            return Err(Error::InvalidSubstitution(
                "constant term of the substituted parameter is unknown".into(),
            ));
        }
        match self.valuation() {
            Some(v) if v < 1 => Err(Error::InvalidSubstitution(format!(
                "parameter change {self} has a term of exponent {v} < 1"
            ))),
            _ => Ok(()),
        }
    }

    /// Composition `s(u)` for a power series `s` and a parameter change `u`
    /// with `u(0) = 0`. Exact below `min(order(s), order(u))`.
    pub fn substitute(&self, u: &Self) -> Result<Self> {
        if self.low < 0 {
            return Err(Error::InvalidSubstitution(format!(
                "{self} has negative exponents; use pullback_differential"
            )));
        }
        u.constant_is_free()?;
        let order = self.order.min(u.order);
        if order <= 0 {
            return Ok(Self::zero(order));
        }
        let len = order as usize;
        let u_dense = u.dense(0, order);
        let mut power = vec![Rational::zero(); len];
        power[0] = Rational::one();
        let mut out = vec![Rational::zero(); len];
        for k in 0..len {
            let c = self.coeff(k as i64).expect("k below order");
            if !c.is_zero() {
                for (o, p) in out.iter_mut().zip(&power) {
                    if !p.is_zero() {
                        *o += c * p;
                    }
                }
            }
            power = convolve(&power, &u_dense, len);
        }
        Ok(Self::canonical(0, order, out))
    }

    /// Pullback `w(u(t)) u'(t)` of the differential `w(t) dt` under a
    /// parameter change `u` with unit linear coefficient.
    ///
    /// Poles shrink the known window: a term `t^-m` of `w` only sees `u` to
    /// relative precision `order(u) - 1`, so the result is exact below
    /// `min(order(w), order(u) - 1 - m)`.
    pub fn pullback_differential(&self, u: &Self) -> Result<Self> {
        u.constant_is_free()?;
        if u.valuation() != Some(1) {
            return Err(Error::InvalidSubstitution(format!(
                "{u} is not a parameter (linear coefficient must be a unit)"
            )));
        }
        // u = t * v with v a unit known below order(u) - 1
        let nv = u.order - 1;
        let v: Vec<Rational> = u.dense(1, u.order);
        let vinv = dense_reciprocal(&v, nv as usize);

        let mut composite_order = self.order;
        for (k, _) in self.terms() {
            composite_order = composite_order.min(k + nv);
        }
        let Some(val) = self.valuation() else {
            let du = u.derivative();
            return Ok(Self::zero(composite_order.min(du.order + self.order)));
        };
        if val >= composite_order {
            return Ok(Self::zero(composite_order));
        }
        let mut composite = vec![Rational::zero(); (composite_order - val) as usize];
        for (k, c) in self.terms() {
            if k >= composite_order {
                break;
            }
            let base = if k >= 0 { &v } else { &vinv };
            let len = (composite_order - k) as usize;
            let vk = dense_pow(base, k.unsigned_abs(), len);
            for (j, x) in vk.iter().enumerate() {
                if !x.is_zero() {
                    composite[(k - val) as usize + j] += c * x;
                }
            }
        }
        let composite = Self::canonical(val, composite_order, composite);
        Ok(composite.mul_general(&u.derivative()))
    }

    /// Compositional inverse of a parameter change `u` (unit linear term):
    /// the series `w` with `u(w(t)) = t` below `order(u)`.
    pub fn revert(&self) -> Result<Self> {
        self.constant_is_free()?;
        if self.valuation() != Some(1) {
            return Err(Error::InvalidSubstitution(format!(
                "{self} is not invertible: linear coefficient vanishes"
            )));
        }
        let order = self.order;
        let lead = self.coeffs[0].clone();
        let inv_lead = lead.recip();
        let mut w = vec![Rational::zero(); order as usize];
        w[1] = inv_lead.clone();
        for n in 2..order {
            let cur = Self::canonical(0, order, w.clone());
            let comp = self.substitute(&cur)?;
            let err = comp.coeff(n).expect("n below order");
            w[n as usize] = -(err * &inv_lead);
        }
        Ok(Self::canonical(0, order, w))
    }

    /// Square root of a series with constant term 1, normalised to constant term 1.
    pub fn sqrt_unit(&self) -> Result<Self> {
        if self.coeff(0) != Some(&Rational::one()) || self.low < 0 {
            return Err(Error::InvalidSubstitution(format!(
                "{self} does not have constant term 1"
            )));
        }
        let len = self.order as usize;
        let f = self.dense(0, self.order);
        let two = Rational::from_integer(2.into());
        let mut r = vec![Rational::zero(); len];
        r[0] = Rational::one();
        for n in 1..len {
            let mut acc = f[n].clone();
            for i in 1..n {
                acc -= &r[i] * &r[n - i];
            }
            r[n] = acc / &two;
        }
        Ok(Self::canonical(0, self.order, r))
    }
}

/// Residue `Res_{t=0} f * w dt`: the coefficient of `t^-1` in `f * w`.
///
/// Fails with [`Error::InsufficientTruncation`] when that coefficient could
/// receive contributions from untracked exponents of either factor.
pub fn residue(f: &TruncSeries, omega: &MeroSeries) -> Result<Rational> {
    let known_below =
        (f.order + omega.effective_valuation()).min(omega.order + f.effective_valuation());
    if known_below <= -1 {
        return Err(Error::InsufficientTruncation(format!(
            "residue of ({f}) * ({omega}) needs coefficients beyond the truncation"
        )));
    }
    let mut acc = Rational::zero();
    for (e, c) in omega.terms() {
        if let Some(x) = f.coeff(-1 - e) {
            if !x.is_zero() {
                acc += c * x;
            }
        }
    }
    Ok(acc)
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let (neg, mag) = if c.is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{e}")?,
                (_, false) => write!(f, "{mag}*t^{e}")?,
            }
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O(t^{})", self.order)
    }
}
