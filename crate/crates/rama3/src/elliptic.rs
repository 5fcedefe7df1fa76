//! Complete elliptic integrals of the first and second kind via the
//! arithmetic–geometric mean, with complementary-modulus companions and the
//! analytic derivative of K.
//!
//! All kernels are pure functions of (input, precision). Each public kernel
//! recomputes at 64 extra bits and verifies agreement to 2^-p before
//! returning; disagreement raises a precision-loss error instead of handing
//! back a silently bad value.

use crate::error::{Error, Result};
use crate::real::{BigReal, Modulus};

/// Guard bits used inside every kernel.
const GUARD: u32 = 32;
/// Extra bits for the doubled-precision self-check pass.
const SELF_CHECK: u32 = 64;

/// Arithmetic–geometric mean of two positive values.
///
/// Iterates a <- (a+b)/2, b <- sqrt(ab) at p+32 bits until
/// |a - b| < 2^-p * max(1, a_0), then rounds to the requested precision p.
/// Quadratic convergence makes the guard iterations cheap.
pub fn agm(a0: &BigReal, b0: &BigReal) -> Result<BigReal> {
    if !a0.is_positive() || !b0.is_positive() {
        return Err(Error::domain("agm requires positive inputs"));
    }
    let prec = a0.prec().min(b0.prec());
    let work = prec + GUARD;
    let (m, _) = agm_with_defects(&a0.rounded_to(work), &b0.rounded_to(work), prec)?;
    Ok(m.rounded_to(prec))
}

/// AGM together with the defect terms c_n = (a_n - b_n)/2 (with c_0 taken
/// from the first pair), which feed the second-kind integral. Inputs must
/// already carry the guard bits; `prec` is the precision the stopping rule
/// refers to.
fn agm_with_defects(a0: &BigReal, b0: &BigReal, prec: u32) -> Result<(BigReal, Vec<BigReal>)> {
    // Stop scale-invariantly: once |a - b| < 2^-(p+8) * max(1, a0) the
    // remaining defect terms are far below the target resolution, while the
    // guard bits keep the threshold clear of the ulp floor.
    let stop = -(prec as i64) - 8 + a0.exponent().unwrap_or(0).max(0);
    let mut a = a0.clone();
    let mut b = b0.clone();
    let mut defects = Vec::new();
    // A few dozen iterations always suffice; the cap only guards stalls.
    for _ in 0..(64 + prec / 4) {
        let diff = &a - &b;
        if diff.abs().abs_below_pow2(stop) {
            return Ok((a, defects));
        }
        let c = diff.div_u64(2)?;
        defects.push(c);
        let next_a = (&a + &b).div_u64(2)?;
        let next_b = (&a * &b).sqrt()?;
        a = next_a;
        b = next_b;
    }
    Err(Error::precision("agm did not converge"))
}

fn ell_k_at(m: &Modulus, prec: u32) -> Result<BigReal> {
    let work = prec + GUARD;
    let one = BigReal::one(work);
    let (mean, _) = agm_with_defects(&one, &m.k_prime().rounded_to(work), prec)?;
    let k = (BigReal::pi(work) / mean.mul_u64(2)).rounded_to(prec);
    Ok(k)
}

fn ell_e_at(m: &Modulus, prec: u32) -> Result<BigReal> {
    let work = prec + GUARD;
    let one = BigReal::one(work);
    let (mean, defects) = agm_with_defects(&one, &m.k_prime().rounded_to(work), prec)?;
    // E = K (1 - sum_{n>=0} 2^(n-1) c_n^2) with c_0 = k.
    let mut sum = m.k().rounded_to(work).square().div_u64(2)?;
    let mut scale: i64 = 0;
    for c in &defects {
        sum = &sum + &c.square().mul_pow2(scale);
        scale += 1;
    }
    let kk = BigReal::pi(work) / mean.mul_u64(2);
    Ok(((&one - &sum) * kk).rounded_to(prec))
}

fn self_checked(
    m: &Modulus,
    prec: u32,
    f: impl Fn(&Modulus, u32) -> Result<BigReal>,
    name: &str,
) -> Result<BigReal> {
    let lo = f(m, prec)?;
    let hi = f(m, prec + SELF_CHECK)?;
    // Agreement to 2^-p at the value's own scale (the p-bit result cannot
    // be closer to the refined one than its own ulp).
    let tol = -(prec as i64) + hi.exponent().unwrap_or(0).max(0) + 2;
    if !lo.agrees_within_pow2(&hi, tol) {
        return Err(Error::precision(format!(
            "{name} self-check failed at {prec} bits: {} vs {}",
            lo.to_decimal(12),
            hi.to_decimal(12)
        )));
    }
    Ok(lo)
}

/// Complete elliptic integral of the first kind, K(k) = pi / (2 agm(1, k')).
pub fn ell_k(m: &Modulus) -> Result<BigReal> {
    self_checked(m, m.prec(), ell_k_at, "ell_k")
}

/// Complete elliptic integral of the second kind via the AGM defect sum.
pub fn ell_e(m: &Modulus) -> Result<BigReal> {
    self_checked(m, m.prec(), ell_e_at, "ell_e")
}

/// K' = K(k'), the first-kind integral at the complementary modulus.
pub fn ell_k_prime(m: &Modulus) -> Result<BigReal> {
    ell_k(&m.complement())
}

/// E' = E(k'), the second-kind integral at the complementary modulus.
pub fn ell_e_prime(m: &Modulus) -> Result<BigReal> {
    ell_e(&m.complement())
}

/// dK/dk = (E - k'^2 K) / (k k'^2).
///
/// For small k the numerator cancels to O(k^2), so the computation runs at
/// a precision raised by twice the magnitude of k's exponent.
pub fn dk_dk(m: &Modulus) -> Result<BigReal> {
    let prec = m.prec();
    let boost = match m.k().exponent() {
        Some(e) if e < 0 => (2 * (-e)) as u32,
        _ => 0,
    };
    let work = prec + GUARD + boost;
    let mw = m.retagged(work);
    let e = ell_e_at(&mw, work)?;
    let k = ell_k_at(&mw, work)?;
    let kp2 = mw.k_prime().square();
    let num = &e - &(&kp2 * &k);
    let den = mw.k() * &kp2;
    Ok((num / den).rounded_to(prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn modulus(s: &str, prec: u32) -> Modulus {
        Modulus::new(BigReal::parse_decimal(s, prec).unwrap()).unwrap()
    }

    #[test]
    fn agm_fixed_point() {
        let one = BigReal::one(256);
        let m = agm(&one, &one).unwrap();
        assert!(m.agrees_within_pow2(&one, -250));
    }

    #[test]
    fn agm_rejects_nonpositive() {
        let one = BigReal::one(128);
        assert!(agm(&BigReal::zero(128), &one).is_err());
        assert!(agm(&BigReal::from_i64(-2, 128), &one).is_err());
    }

    #[test]
    fn agm_result_carries_min_precision() {
        let a = BigReal::from_u64(2, 512).sqrt().unwrap();
        let b = BigReal::one(256);
        assert_eq!(agm(&a, &b).unwrap().prec(), 256);
    }

    #[test]
    fn k_at_zero_limit_is_half_pi() {
        // k = 2^-100 is numerically indistinguishable from the k -> 0 limit
        // at 160 bits: K -> pi/2.
        let m = Modulus::new(BigReal::pow2(-100, 160)).unwrap();
        let k = ell_k(&m).unwrap();
        let half_pi = BigReal::pi(160).div_u64(2).unwrap();
        assert!(k.agrees_within_pow2(&half_pi, -150));
    }

    #[test]
    fn e_at_one_limit() {
        // E(k) -> 1 as k -> 1; use the complement of a tiny modulus.
        let m = Modulus::new(BigReal::pow2(-100, 160)).unwrap().complement();
        let e = ell_e(&m).unwrap();
        assert!(e.agrees_within_pow2(&BigReal::one(160), -150));
    }

    #[test]
    fn self_complementary_point() {
        // k = 1/sqrt(2): K' = K.
        let k = BigReal::from_u64(2, 320).sqrt().unwrap().recip().unwrap();
        let m = Modulus::new(k).unwrap();
        let kk = ell_k(&m).unwrap();
        let kp = ell_k_prime(&m).unwrap();
        assert!(kk.agrees_within_pow2(&kp, -310));
        // Reference value of K(1/sqrt 2).
        let reference =
            BigReal::parse_decimal("1.85407467730137191843385034719526004621759882352182", 320)
                .unwrap();
        assert!(kk.agrees_within_pow2(&reference, -160));
    }

    #[test]
    fn k_prime_unfolds_definition() {
        // K'(0.1) = K(sqrt(0.99)).
        let m = modulus("0.1", 256);
        let lhs = ell_k_prime(&m).unwrap();
        let k2 = BigReal::parse_decimal("0.99", 256).unwrap().sqrt().unwrap();
        let rhs = ell_k(&Modulus::new(k2).unwrap()).unwrap();
        assert!(lhs.agrees_within_pow2(&rhs, -240));
    }

    #[test]
    fn monotonicity_on_grid() {
        let mut prev_k: Option<BigReal> = None;
        let mut prev_e: Option<BigReal> = None;
        for i in 1..20 {
            let k = BigReal::from_u64(i, 192).div_u64(20).unwrap();
            let m = Modulus::new(k).unwrap();
            let kk = ell_k(&m).unwrap();
            let ee = ell_e(&m).unwrap();
            if let Some(p) = prev_k {
                assert!(p < kk, "K must increase in k");
            }
            if let Some(p) = prev_e {
                assert!(p > ee, "E must decrease in k");
            }
            prev_k = Some(kk);
            prev_e = Some(ee);
        }
    }

    #[test]
    fn derivative_substitution_at_self_complementary_point() {
        // At k = 1/sqrt(2): dK/dk = (E - K/2) / (k/2).
        let k = BigReal::from_u64(2, 320).sqrt().unwrap().recip().unwrap();
        let m = Modulus::new(k.clone()).unwrap();
        let lhs = dk_dk(&m).unwrap();
        let e = ell_e(&m).unwrap();
        let kk = ell_k(&m).unwrap();
        let rhs = (&e - &kk.div_u64(2).unwrap()) / k.div_u64(2).unwrap();
        assert!(lhs.agrees_within_pow2(&rhs, -300));
    }

    #[test]
    fn modulus_near_one_needs_precision() {
        // 1 - 2^-200 is not representable apart from 1 at 64 bits.
        let one = BigReal::one(64);
        let k = &one - &BigReal::pow2(-200, 64);
        assert!(Modulus::new(k).is_err());
    }
}
