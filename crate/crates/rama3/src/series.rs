//! Rigorous evaluation of Ramanujan-type series with certified tail bounds,
//! and the hypergeometric transformation identities the modular machinery
//! rests on.
//!
//! A series of level s ∈ {2, 3, 4, 6} has terms
//! `t_n = (1/2)_n (1/s)_n (1-1/s)_n / (1)_n^3 * z^n`, generated here by the
//! exact ratio recurrence
//! `t_{n+1}/t_n = z (2n+1)(sn+1)(sn+s-1) / (2 s^2 (n+1)^3)` —
//! O(1) work per term and no factorial recomputation.

use crate::catalog::{CatalogEntry, EntryKind};
use crate::error::{Error, Result};
use crate::real::BigReal;
use crate::surd::SurdExpr;

/// A series parameter: either an exact surd expression (catalog entries)
/// or a high-precision numeric value (fresh derivations).
#[derive(Clone, Debug)]
pub enum ParamValue {
    Exact(SurdExpr),
    Numeric(BigReal),
}

impl ParamValue {
    pub fn eval(&self, prec: u32) -> Result<BigReal> {
        match self {
            ParamValue::Exact(e) => e.eval(prec),
            ParamValue::Numeric(v) => Ok(v.rounded_to(prec.min(v.prec()))),
        }
    }

    pub fn exact_text(&self) -> Option<String> {
        match self {
            ParamValue::Exact(e) => Some(e.to_string()),
            ParamValue::Numeric(_) => None,
        }
    }
}

/// Parameters of one Ramanujan-type series:
/// `normalization * sum_n t_n (a + b n) = 1/pi` is the certified claim.
#[derive(Clone, Debug)]
pub struct SeriesParams {
    pub s: u32,
    pub z: ParamValue,
    pub a: ParamValue,
    pub b: ParamValue,
    pub normalization: ParamValue,
}

impl SeriesParams {
    pub fn new(
        s: u32,
        z: ParamValue,
        a: ParamValue,
        b: ParamValue,
        normalization: ParamValue,
    ) -> Result<Self> {
        if ![2, 3, 4, 6].contains(&s) {
            return Err(Error::domain(format!("s = {s} not in {{2, 3, 4, 6}}")));
        }
        Ok(SeriesParams { s, z, a, b, normalization })
    }

    /// Lift a catalog series entry (placeholders are rejected).
    pub fn from_catalog(e: &CatalogEntry) -> Result<Self> {
        if e.kind != EntryKind::Series {
            return Err(Error::domain(format!("catalog entry `{}` is not a series", e.id)));
        }
        match (&e.z, &e.a, &e.b, &e.normalization, e.s) {
            (Some(z), Some(a), Some(b), Some(n), Some(s)) => SeriesParams::new(
                s,
                ParamValue::Exact(z.clone()),
                ParamValue::Exact(a.clone()),
                ParamValue::Exact(b.clone()),
                ParamValue::Exact(n.clone()),
            ),
            _ => Err(Error::NotAvailable(format!(
                "catalog entry `{}` is a placeholder without parameter values",
                e.id
            ))),
        }
    }
}

/// Streaming generator for `t_n = (1/2)_n (1/s)_n (1-1/s)_n / (1)_n^3 z^n`.
pub struct TermGenerator {
    s: u64,
    z: BigReal,
    term: BigReal,
    n: u64,
}

impl TermGenerator {
    pub fn new(s: u32, z: BigReal) -> Result<Self> {
        if ![2, 3, 4, 6].contains(&s) {
            return Err(Error::domain(format!("s = {s} not in {{2, 3, 4, 6}}")));
        }
        let one = BigReal::one(z.prec());
        Ok(TermGenerator { s: s as u64, z, term: one, n: 0 })
    }

    /// Current index n.
    pub fn index(&self) -> u64 {
        self.n
    }

    /// Current term t_n.
    pub fn term(&self) -> &BigReal {
        &self.term
    }

    /// The ratio |t_{n+1}/t_n| / |z|, a rational in n that increases
    /// monotonically to 1 from below.
    fn rational_factor(&self, n: u64) -> (u64, u64) {
        let s = self.s;
        let num = (2 * n + 1) * (s * n + 1) * (s * n + s - 1);
        let den = 2 * s * s * (n + 1) * (n + 1) * (n + 1);
        (num, den)
    }

    /// Advance to t_{n+1}.
    pub fn advance(&mut self) -> Result<()> {
        let (num, den) = self.rational_factor(self.n);
        self.term = (&self.term * &self.z).mul_u64(num).div_u64(den)?;
        self.n += 1;
        Ok(())
    }

    /// Safe bound q >= sup_{m >= n} |t_{m+1}/t_m|, valid past n0 = 8 where
    /// the cubic-over-cubic factor is monotone: the max of |z| (the limit)
    /// and the ratio at the current index.
    pub fn ratio_sup(&self) -> Result<BigReal> {
        let z_abs = self.z.abs();
        let (num, den) = self.rational_factor(self.n);
        let here = z_abs.mul_u64(num).div_u64(den)?;
        Ok(if here > z_abs { here } else { z_abs })
    }
}

/// Fewest terms summed before the tail majorant is trusted.
const MIN_TERMS: u64 = 8;
/// Hard cap on summation length (reached only for |z| pathologically
/// close to 1).
const MAX_TERMS: u64 = 40_000_000;

/// Sum `sum_n t_n (a + b n)` until the geometric majorant certifies the
/// remainder below 2^-target_bits. Returns the value and the certified
/// tail bound.
pub fn eval_series(p: &SeriesParams, target_bits: u32) -> Result<(BigReal, BigReal)> {
    let work = target_bits + 64;
    let z = p.z.eval(work)?;
    if z.abs() >= BigReal::one(work) {
        return Err(Error::domain(format!(
            "|z| = {} >= 1: series diverges",
            z.abs().to_decimal(8)
        )));
    }
    let a = p.a.eval(work)?;
    let b = p.b.eval(work)?;
    let a_abs = a.abs();
    let b_abs = b.abs();
    let one = BigReal::one(work);
    let mut gen = TermGenerator::new(p.s, z)?;
    let mut sum = BigReal::zero(work);
    let target = -(target_bits as i64);
    loop {
        let n = gen.index();
        if n >= MAX_TERMS {
            return Err(Error::precision("series summation exceeded the term cap"));
        }
        let weight = &a + &b.mul_u64(n);
        sum = &sum + &(gen.term() * &weight);
        gen.advance()?;
        if n + 1 < MIN_TERMS {
            continue;
        }
        // Remainder from index m = n+1 on:
        //   sum_{j>=0} |t_m| q^j (A + B (m + j))
        //   <= |t_m| ((A + B m)/(1-q) + B q/(1-q)^2).
        let q = gen.ratio_sup()?;
        let gap = &one - &q;
        let t_next = gen.term().abs();
        let head = &(&a_abs + &b_abs.mul_u64(n + 1)) / &gap;
        let tail = &(&b_abs * &q) / &gap.square();
        let bound = (&t_next * &(&head + &tail)).mul_pow2(1);
        if bound.abs_below_pow2(target) {
            return Ok((sum.rounded_to(target_bits), bound));
        }
    }
}

/// Certified residual of the normalized series against 1/pi:
/// returns (normalized value, tail bound, |value - 1/pi|).
pub fn pi_residual(p: &SeriesParams, target_bits: u32) -> Result<(BigReal, BigReal, BigReal)> {
    let work = target_bits + 32;
    let (raw, tail) = eval_series(p, work)?;
    let c = p.normalization.eval(work)?;
    let value = &c * &raw;
    let inv_pi = BigReal::pi(work).recip()?;
    let residual = value.abs_diff(&inv_pi);
    let scaled_tail = &c.abs() * &tail;
    Ok((value.rounded_to(target_bits), scaled_tail, residual))
}

/// Generating-function families: the same Pochhammer triple as level-s
/// series terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GfFamily {
    /// (1/2)^3 — level-2 terms A_n
    A,
    /// (1/4, 1/2, 3/4) — B_n
    B,
    /// (1/6, 1/2, 5/6) — C_n
    C,
    /// (1/3, 1/2, 2/3) — D_n
    D,
}

impl GfFamily {
    fn s(self) -> u32 {
        match self {
            GfFamily::A => 2,
            GfFamily::B => 4,
            GfFamily::C => 6,
            GfFamily::D => 3,
        }
    }
}

/// Largest argument magnitude the generating functions accept.
const GF_CAP_NUM: u64 = 9;
const GF_CAP_DEN: u64 = 10;

/// Direct summation of a generating function with geometric tail bound.
pub fn gf(family: GfFamily, x: &BigReal, target_bits: u32) -> Result<BigReal> {
    let work = target_bits + 64;
    let cap = BigReal::from_u64(GF_CAP_NUM, work).div_u64(GF_CAP_DEN)?;
    if x.abs() >= cap {
        return Err(Error::domain(format!(
            "generating-function argument |{}| >= 0.9",
            x.to_decimal(8)
        )));
    }
    let mut gen = TermGenerator::new(family.s(), x.rounded_to(work))?;
    let mut sum = BigReal::zero(work);
    let one = BigReal::one(work);
    let target = -(target_bits as i64);
    loop {
        if gen.index() >= MAX_TERMS {
            return Err(Error::precision("generating function exceeded the term cap"));
        }
        sum = &sum + gen.term();
        gen.advance()?;
        if gen.index() < MIN_TERMS {
            continue;
        }
        let q = gen.ratio_sup()?;
        let bound = &(&gen.term().abs() * &q) / &(&one - &q);
        if bound.abs_below_pow2(target) {
            return Ok(sum.rounded_to(target_bits));
        }
    }
}

pub fn gf_a(x: &BigReal, target_bits: u32) -> Result<BigReal> {
    gf(GfFamily::A, x, target_bits)
}

pub fn gf_b(x: &BigReal, target_bits: u32) -> Result<BigReal> {
    gf(GfFamily::B, x, target_bits)
}

pub fn gf_c(x: &BigReal, target_bits: u32) -> Result<BigReal> {
    gf(GfFamily::C, x, target_bits)
}

pub fn gf_d(x: &BigReal, target_bits: u32) -> Result<BigReal> {
    gf(GfFamily::D, x, target_bits)
}

/// Residuals of the two cubic transformations of the A-generating function:
///
/// 1. `sum A_n x^n = 2/sqrt(4-x) * sum C_n (27 x^2/(4-x)^3)^n`
/// 2. `sum A_n x^n = 1/sqrt(1-4x) * sum C_n (-27 x/(1-4x)^3)^n`
///
/// Both transformed arguments must have modulus < 1 (for the second this
/// restricts positive x below roughly 0.0267).
pub fn check_bailey_cubic(x: &BigReal, target_bits: u32) -> Result<(BigReal, BigReal)> {
    let work = target_bits + 32;
    let x = x.rounded_to(work);
    let lhs = gf_a(&x, work)?;
    let four = BigReal::from_u64(4, work);
    let one = BigReal::one(work);

    let den1 = &four - &x;
    let arg1 = &x.square().mul_u64(27) / &den1.powi(3)?;
    let rhs1 = &(&BigReal::from_u64(2, work) / &den1.sqrt()?) * &gf_c(&arg1, work)?;
    let res1 = lhs.abs_diff(&rhs1);

    let den2 = &one - &x.mul_u64(4);
    if !den2.is_positive() {
        return Err(Error::domain("second cubic transform needs x < 1/4"));
    }
    let arg2 = -&(&x.mul_u64(27) / &den2.powi(3)?);
    let rhs2 = &gf_c(&arg2, work)? / &den2.sqrt()?;
    let res2 = lhs.abs_diff(&rhs2);

    Ok((res1.rounded_to(target_bits), res2.rounded_to(target_bits)))
}

/// Residual of the degenerate Kummer–Goursat transform connecting the D-
/// and C-generating functions:
/// `sum D_n (4y(1-y))^n = 3/sqrt(9-8y) * sum C_n (64 y^3 (1-y)/(9-8y)^3)^n`.
pub fn check_kummer_goursat(y: &BigReal, target_bits: u32) -> Result<BigReal> {
    let work = target_bits + 32;
    let fifth = BigReal::from_u64(1, work).div_u64(5)?;
    if y.abs() >= fifth {
        return Err(Error::domain("kummer-goursat check requires y in (-0.2, 0.2)"));
    }
    let y = y.rounded_to(work);
    let one = BigReal::one(work);
    let nine = BigReal::from_u64(9, work);
    let lhs_arg = (&y * &(&one - &y)).mul_pow2(2);
    let lhs = gf_d(&lhs_arg, work)?;
    let den = &nine - &y.mul_pow2(3);
    let rhs_arg = &(&y.powi(3)? * &(&one - &y)).mul_u64(64) / &den.powi(3)?;
    let rhs = &(&BigReal::from_u64(3, work) / &den.sqrt()?) * &gf_c(&rhs_arg, work)?;
    Ok(lhs.abs_diff(&rhs).rounded_to(target_bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;

    fn num(v: i64, prec: u32) -> ParamValue {
        ParamValue::Numeric(BigReal::from_i64(v, prec))
    }

    #[test]
    fn single_term_when_z_zero() {
        let p = SeriesParams::new(3, num(0, 256), num(7, 256), num(5, 256), num(1, 256)).unwrap();
        let (v, tail) = eval_series(&p, 200).unwrap();
        assert_eq!(v.to_f64(), 7.0);
        assert!(tail.abs_below_pow2(-200));
    }

    #[test]
    fn divergent_z_rejected() {
        let p = SeriesParams::new(3, num(1, 256), num(1, 256), num(1, 256), num(1, 256)).unwrap();
        assert!(matches!(eval_series(&p, 128), Err(Error::Domain(_))));
    }

    #[test]
    fn invalid_s_rejected() {
        assert!(SeriesParams::new(5, num(0, 128), num(1, 128), num(1, 128), num(1, 128)).is_err());
        assert!(TermGenerator::new(7, BigReal::zero(128)).is_err());
    }

    #[test]
    fn known_series_certifies_pi() {
        // Catalog entry with z = -1/16 and coefficients 51n + 7.
        let cat = Catalog::builtin();
        let p = SeriesParams::from_catalog(cat.get("eq4.2").unwrap()).unwrap();
        let (_, tail, residual) = pi_residual(&p, 256).unwrap();
        assert!(tail.abs_below_pow2(-256));
        assert!(residual.abs_below_pow2(-250), "residual {:?}", residual);
    }

    #[test]
    fn tail_certificate_honest_under_extension() {
        // Summing 50 extra terms moves the value by less than the bound.
        let cat = Catalog::builtin();
        for id in ["eq4.1", "eq4.7", "baruah-berndt-3"] {
            let p = SeriesParams::from_catalog(cat.get(id).unwrap()).unwrap();
            let (v, tail) = eval_series(&p, 192).unwrap();
            let (v_more, _) = eval_series(&p, 192 + 80).unwrap();
            let moved = v.abs_diff(&v_more.rounded_to(192));
            assert!(
                moved <= tail || moved.abs_below_pow2(-190),
                "{id}: moved {moved:?} vs tail {tail:?}"
            );
        }
    }

    #[test]
    fn placeholder_entries_are_rejected() {
        let cat = Catalog::builtin();
        let e = cat.get("n13-aldawoud").unwrap();
        assert!(matches!(
            SeriesParams::from_catalog(e),
            Err(Error::NotAvailable(_))
        ));
    }

    #[test]
    fn gf_at_zero_is_one() {
        let z = BigReal::zero(192);
        for fam in [GfFamily::A, GfFamily::B, GfFamily::C, GfFamily::D] {
            let v = gf(fam, &z, 128).unwrap();
            assert!(v.agrees_within_pow2(&BigReal::one(192), -120));
        }
    }

    #[test]
    fn gf_rejects_large_argument() {
        let x = BigReal::parse_decimal("0.95", 128).unwrap();
        assert!(gf_a(&x, 128).is_err());
    }

    #[test]
    fn bailey_transforms_at_trivial_point() {
        let (r1, r2) = check_bailey_cubic(&BigReal::zero(256), 192).unwrap();
        assert!(r1.abs_below_pow2(-180));
        assert!(r2.abs_below_pow2(-180));
    }

    #[test]
    fn kummer_goursat_at_trivial_point() {
        let r = check_kummer_goursat(&BigReal::zero(256), 192).unwrap();
        assert!(r.abs_below_pow2(-180));
        assert!(check_kummer_goursat(&BigReal::parse_decimal("0.3", 128).unwrap(), 128).is_err());
    }
}
