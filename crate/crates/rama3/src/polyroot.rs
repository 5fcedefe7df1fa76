//! Real-root isolation for polynomials with arbitrary-precision real
//! coefficients: Sturm chains for counting, dyadic bisection for isolating,
//! and safeguarded Newton for polishing.
//!
//! Root selection in the modular machinery must be deterministic, so roots
//! are located by sign counting rather than by closed-form radicals.

use crate::error::{Error, Result};
use crate::real::BigReal;

/// Polynomial with [`BigReal`] coefficients, stored lowest degree first.
#[derive(Clone, Debug)]
pub struct RealPoly {
    coeffs: Vec<BigReal>,
    prec: u32,
}

/// Relative threshold below which a coefficient or value counts as zero.
const ZERO_SLACK: i64 = 24;

impl RealPoly {
    pub fn new(coeffs: Vec<BigReal>) -> Self {
        let prec = coeffs.iter().map(|c| c.prec()).min().unwrap_or(64);
        let mut p = RealPoly { coeffs, prec };
        p.trim();
        p
    }

    fn trim(&mut self) {
        let scale = self.max_coeff_exponent();
        while let Some(c) = self.coeffs.last() {
            if c.is_zero() || c.exponent().unwrap_or(i64::MIN) < scale - self.prec as i64 + ZERO_SLACK
            {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    fn max_coeff_exponent(&self) -> i64 {
        self.coeffs
            .iter()
            .filter_map(|c| c.exponent())
            .max()
            .unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigReal] {
        &self.coeffs
    }

    /// Horner evaluation at the minimum of the coefficient and argument
    /// precisions.
    pub fn eval(&self, x: &BigReal) -> BigReal {
        let prec = self.prec.min(x.prec());
        let mut acc = BigReal::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> RealPoly {
        if self.coeffs.len() <= 1 {
            return RealPoly::new(vec![]);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul_u64(i as u64))
            .collect();
        RealPoly::new(coeffs)
    }

    /// Divide all coefficients by the largest magnitude (sign pattern is
    /// unchanged); keeps Sturm remainders from drifting out of range.
    fn normalized(&self) -> RealPoly {
        let max = self
            .coeffs
            .iter()
            .map(|c| c.abs())
            .max_by(|a, b| a.partial_cmp(b).unwrap())
            .unwrap_or_else(|| BigReal::one(self.prec));
        if max.is_zero() {
            return self.clone();
        }
        RealPoly::new(self.coeffs.iter().map(|c| c / &max).collect())
    }

    /// Remainder of self / divisor (coefficients at working precision).
    fn rem(&self, divisor: &RealPoly) -> RealPoly {
        let dd = divisor.degree();
        let lead = divisor.coeffs.last().expect("nonzero divisor");
        let mut rem = self.coeffs.clone();
        while rem.len() > dd {
            let factor = rem.last().unwrap() / lead;
            let shift = rem.len() - 1 - dd;
            for i in 0..=dd {
                let sub = &factor * &divisor.coeffs[i];
                rem[shift + i] = &rem[shift + i] - &sub;
            }
            rem.pop();
        }
        RealPoly::new(rem)
    }

    fn sturm_chain(&self) -> Vec<RealPoly> {
        let mut chain = vec![self.normalized()];
        let d = self.derivative();
        if d.is_zero() {
            return chain;
        }
        chain.push(d.normalized());
        loop {
            let n = chain.len();
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            let neg = RealPoly::new(r.coeffs.iter().map(|c| -c).collect());
            chain.push(neg.normalized());
            if chain.last().unwrap().degree() == 0 {
                break;
            }
        }
        chain
    }

    /// Evaluate the chain's sign sequence at x; values within the noise
    /// floor count as zero and are skipped (standard Sturm convention).
    fn variations(chain: &[RealPoly], x: &BigReal) -> usize {
        let mut signs = Vec::with_capacity(chain.len());
        for p in chain {
            let v = p.eval(x);
            let noise = p.noise_floor_at(x);
            let s = if v.abs_below_pow2(noise) { 0 } else { v.signum_i() };
            if s != 0 {
                signs.push(s);
            }
        }
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Exponent below which an evaluation at x is indistinguishable from 0.
    fn noise_floor_at(&self, x: &BigReal) -> i64 {
        let xe = x.exponent().unwrap_or(0).max(0);
        self.max_coeff_exponent() + xe * self.degree() as i64 - self.prec as i64 + ZERO_SLACK
    }

    /// Number of distinct real roots in (lo, hi].
    pub fn count_roots_in(&self, lo: &BigReal, hi: &BigReal) -> usize {
        let chain = self.sturm_chain();
        Self::variations(&chain, lo).saturating_sub(Self::variations(&chain, hi))
    }

    /// Cauchy bound: all real roots lie in (-M, M).
    pub fn root_bound(&self) -> BigReal {
        let lead = self.coeffs.last().expect("nonzero polynomial").abs();
        let mut max = BigReal::zero(self.prec);
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let a = c.abs();
            if a > max {
                max = a;
            }
        }
        &BigReal::one(self.prec) + &(max / lead)
    }

    /// Isolate every distinct real root in (lo, hi): returns disjoint
    /// bracketing intervals, each containing exactly one root.
    pub fn isolate_roots_in(&self, lo: &BigReal, hi: &BigReal) -> Result<Vec<(BigReal, BigReal)>> {
        if self.is_zero() {
            return Err(Error::domain("zero polynomial"));
        }
        if self.degree() == 0 {
            return Ok(vec![]);
        }
        let chain = self.sturm_chain();
        let mut out = Vec::new();
        let mut queue = vec![(lo.clone(), hi.clone())];
        // Depth cap: enough to separate roots 2^-(prec/2) apart.
        let mut depth_budget = (self.prec as usize / 2 + 16) * 8;
        while let Some((a, b)) = queue.pop() {
            if depth_budget == 0 {
                return Err(Error::InternalInconsistency(
                    "root isolation failed to separate roots".into(),
                ));
            }
            depth_budget -= 1;
            let count = Self::variations(&chain, &a).saturating_sub(Self::variations(&chain, &b));
            if count == 0 {
                continue;
            }
            if count == 1 {
                out.push((a, b));
                continue;
            }
            let mid = (&a + &b).div_u64(2)?;
            queue.push((a, mid.clone()));
            queue.push((mid, b));
        }
        out.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        Ok(out)
    }

    /// Polish a bracketed simple root to roughly 2^target_exp, alternating
    /// Newton steps with bisection whenever Newton leaves the bracket.
    pub fn refine_root(&self, lo: &BigReal, hi: &BigReal, target_exp: i64) -> Result<BigReal> {
        let mut a = lo.clone();
        let mut b = hi.clone();
        let mut fa = self.eval(&a);
        let deriv = self.derivative();
        // Make sure the bracket has a sign change; nudge endpoints sitting
        // exactly on a root of the chain.
        let mut fb = self.eval(&b);
        if fa.is_zero() {
            return Ok(a);
        }
        if fb.is_zero() {
            return Ok(b);
        }
        if fa.signum_i() == fb.signum_i() {
            // Sturm said one root inside; walk inward to find the change.
            let mut steps = 0;
            let mut width = (&b - &a).div_u64(4)?;
            loop {
                let probe = &a + &width;
                if probe >= b {
                    return Err(Error::InternalInconsistency(
                        "bracket without sign change (even-multiplicity root?)".into(),
                    ));
                }
                let fp = self.eval(&probe);
                if fp.is_zero() || fp.signum_i() != fa.signum_i() {
                    b = probe;
                    fb = fp;
                    break;
                }
                width = (&width + &(&b - &a)).div_u64(2)?;
                steps += 1;
                if steps > 128 {
                    return Err(Error::InternalInconsistency(
                        "bracket without sign change (even-multiplicity root?)".into(),
                    ));
                }
            }
        }
        let mut x = (&a + &b).div_u64(2)?;
        for _ in 0..(self.prec as usize + 64) {
            let width = &b - &a;
            if width.abs_below_pow2(target_exp) {
                break;
            }
            let fx = self.eval(&x);
            if fx.is_zero() {
                return Ok(x);
            }
            // Keep the bracket current.
            if fx.signum_i() == fa.signum_i() {
                a = x.clone();
                fa = fx.clone();
            } else {
                b = x.clone();
                fb = fx.clone();
            }
            let _ = &fb;
            let d = deriv.eval(&x);
            let newton_ok = !d.is_zero();
            let mut next = if newton_ok {
                &x - &(&fx / &d)
            } else {
                (&a + &b).div_u64(2)?
            };
            if next <= a || next >= b {
                next = (&a + &b).div_u64(2)?;
            }
            x = next;
        }
        Ok(x)
    }
}
