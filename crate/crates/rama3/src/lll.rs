//! Exact integer LLL lattice reduction.
//!
//! The all-integer variant that tracks the Gram–Schmidt data through the
//! subdeterminants d_i and scaled coefficients lambda_{i,j} = mu_{i,j} d_{j+1},
//! so no rational arithmetic is needed. Used to detect integer relations
//! among powers of a numerical value.

use rug::Integer;

/// Reduce the rows of `basis` in place (Lovász parameter 3/4).
///
/// Rows must be linearly independent. On return the rows form an
/// LLL-reduced basis of the same lattice, shortest-ish rows first.
pub fn lll_reduce(basis: &mut Vec<Vec<Integer>>) {
    let n = basis.len();
    if n <= 1 {
        return;
    }

    // Integer Gram–Schmidt bookkeeping: d[0] = 1, d[i+1] = det of the
    // leading i+1 Gram block; lam[i][j] for j < i.
    let mut d: Vec<Integer> = vec![Integer::from(1); n + 1];
    let mut lam: Vec<Vec<Integer>> = vec![vec![Integer::new(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut u = dot(&basis[i], &basis[j]);
            for k in 0..j {
                let prod = Integer::from(&d[k + 1] * &u) - Integer::from(&lam[i][k] * &lam[j][k]);
                u = prod / &d[k];
            }
            if j < i {
                lam[i][j] = u;
            } else {
                d[i + 1] = u;
            }
        }
        assert!(d[i + 1] > 0, "lll_reduce requires independent rows");
    }

    let red = |basis: &mut Vec<Vec<Integer>>,
               lam: &mut Vec<Vec<Integer>>,
               d: &Vec<Integer>,
               k: usize,
               l: usize| {
        let two_lam = Integer::from(&lam[k][l] * 2i32).abs();
        if two_lam <= d[l + 1] {
            return;
        }
        let q = round_div(&lam[k][l], &d[l + 1]);
        let (head, tail) = basis.split_at_mut(k);
        let bl = &head[l];
        for (x, y) in tail[0].iter_mut().zip(bl.iter()) {
            *x -= Integer::from(&q * y);
        }
        let lam_l = lam[l].clone();
        for j in 0..l {
            lam[k][j] -= Integer::from(&q * &lam_l[j]);
        }
        lam[k][l] -= Integer::from(&q * &d[l + 1]);
    };

    let mut k = 1usize;
    while k < n {
        red(basis, &mut lam, &d, k, k - 1);
        // Lovász condition with delta = 3/4:
        // 4 (d[k+1] d[k-1] + lam^2) < 3 d[k]^2  => swap
        let lhs = (Integer::from(&d[k + 1] * &d[k - 1]) + Integer::from(&lam[k][k - 1]).square())
            * 4u32;
        let rhs = Integer::from(&d[k]).square() * 3u32;
        if lhs < rhs {
            basis.swap(k, k - 1);
            for j in 0..k.saturating_sub(1) {
                let t = lam[k][j].clone();
                lam[k][j] = lam[k - 1][j].clone();
                lam[k - 1][j] = t;
            }
            let lam_k = lam[k][k - 1].clone();
            let b = (Integer::from(&d[k - 1] * &d[k + 1]) + Integer::from(&lam_k).square())
                / &d[k];
            for i in (k + 1)..n {
                let t = lam[i][k].clone();
                lam[i][k] = (Integer::from(&d[k + 1] * &lam[i][k - 1])
                    - Integer::from(&lam_k * &t))
                    / &d[k];
                lam[i][k - 1] =
                    (Integer::from(&b * &t) + Integer::from(&lam_k * &lam[i][k])) / &d[k + 1];
            }
            d[k] = b;
            k = k.max(2) - 1;
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                red(basis, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
}

fn dot(a: &[Integer], b: &[Integer]) -> Integer {
    let mut acc = Integer::new();
    for (x, y) in a.iter().zip(b.iter()) {
        acc += Integer::from(x * y);
    }
    acc
}

/// Nearest-integer quotient (ties toward even are fine here).
fn round_div(num: &Integer, den: &Integer) -> Integer {
    debug_assert!(*den > 0);
    let half = Integer::from(den / 2u32);
    if *num >= 0 {
        Integer::from(num + &half) / den
    } else {
        -(Integer::from(half - num) / den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norm2(v: &[Integer]) -> Integer {
        dot(v, v)
    }

    #[test]
    fn round_div_matches_nearest() {
        let cases = [(7, 2, 4), (-7, 2, -3), (9, 4, 2), (-9, 4, -2), (10, 4, 3)];
        for (n, d, want) in cases {
            let got = round_div(&Integer::from(n), &Integer::from(d));
            // Nearest integer up to tie direction.
            let exact = n as f64 / d as f64;
            assert!(
                (got.to_f64() - exact).abs() <= 0.5 + 1e-9,
                "{n}/{d} -> {got}, want near {want}"
            );
        }
    }

    #[test]
    fn reduces_classic_example() {
        // Rows (1, 1, 1), (-1, 0, 2), (3, 5, 6): a standard small lattice.
        let mut b = vec![
            vec![Integer::from(1), Integer::from(1), Integer::from(1)],
            vec![Integer::from(-1), Integer::from(0), Integer::from(2)],
            vec![Integer::from(3), Integer::from(5), Integer::from(6)],
        ];
        lll_reduce(&mut b);
        // First vector of the reduced basis must be short: norm^2 <= 3.
        assert!(norm2(&b[0]) <= 3, "{:?}", b);
    }

    #[test]
    fn finds_integer_relation_for_sqrt2() {
        // Lattice encoding 1, v, v^2 with v = sqrt(2) scaled by 2^60:
        // a short vector reveals -2 - 0 v + 1 v^2 = 0.
        let scale = 60u32;
        let v = 2f64.sqrt();
        let rows = 3usize;
        let mut b: Vec<Vec<Integer>> = Vec::new();
        for i in 0..rows {
            let mut row = vec![Integer::new(); rows + 1];
            row[i] = Integer::from(1);
            let scaled = v.powi(i as i32) * 2f64.powi(scale as i32);
            row[rows] = Integer::from_f64(scaled.round()).unwrap();
            b.push(row);
        }
        lll_reduce(&mut b);
        let found = b.iter().any(|row| {
            row[0] == Integer::from(-2) && row[1] == 0 && row[2] == Integer::from(1)
                || row[0] == Integer::from(2) && row[1] == 0 && row[2] == Integer::from(-1)
        });
        assert!(found, "no sqrt(2) relation in {:?}", b);
    }
}
