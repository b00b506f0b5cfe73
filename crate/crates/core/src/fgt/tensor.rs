//! Dense `p^d` tensors stored flat, last dimension fastest.

/// `out += q * (v_0 (x) v_1 (x) ... )`, every `v_i` of length `p`.
pub(crate) fn add_outer(out: &mut [f64], vecs: &[&[f64]], q: f64, scratch: &mut Vec<f64>) {
    scratch.clear();
    scratch.push(q);
    let mut next = Vec::with_capacity(out.len());
    for v in vecs {
        next.clear();
        for &a in scratch.iter() {
            next.extend(v.iter().map(|&b| a * b));
        }
        std::mem::swap(scratch, &mut next);
    }
    for (o, s) in out.iter_mut().zip(scratch.iter()) {
        *o += s;
    }
}

/// `sum_alpha t[alpha] * prod_i v_i[alpha_i]`, contracting the last dimension first.
pub(crate) fn contract(t: &[f64], vecs: &[&[f64]], scratch: &mut Vec<f64>) -> f64 {
    scratch.clear();
    scratch.extend_from_slice(t);
    for v in vecs.iter().rev() {
        let p = v.len();
        let len = scratch.len() / p;
        for i in 0..len {
            let row = &scratch[i * p..(i + 1) * p];
            let s: f64 = row.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
            scratch[i] = s;
        }
        scratch.truncate(len);
    }
    scratch[0]
}

/// Applies one `p x p` matrix per dimension: `out[b] = sum_a prod_i m_i[b_i][a_i] t[a]`.
///
/// Each `m_i` is row-major. The product is separable, so it is evaluated one
/// mode at a time.
pub(crate) fn apply_per_mode(t: &[f64], mats: &[Vec<f64>], p: usize) -> Vec<f64> {
    let mut cur = t.to_vec();
    let mut next = vec![0.0; t.len()];
    let total = t.len();
    let mut stride = total;
    for m in mats {
        // the mode of this dimension has stride `stride / p`
        stride /= p;
        let outer = total / (stride * p);
        for o in 0..outer {
            let base = o * stride * p;
            for s in 0..stride {
                for b in 0..p {
                    let mut acc = 0.0;
                    for a in 0..p {
                        acc += m[b * p + a] * cur[base + a * stride + s];
                    }
                    next[base + b * stride + s] = acc;
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outer_and_contract_agree() {
        let a = [1.0, 2.0, 3.0];
        let b = [0.5, -1.0, 4.0];
        let mut t = vec![0.0; 9];
        let mut s = Vec::new();
        add_outer(&mut t, &[&a, &b], 2.0, &mut s);
        assert_eq!(t[3 + 2], 2.0 * 2.0 * 4.0);
        let x = [1.0, 0.0, 1.0];
        let y = [0.0, 1.0, 0.0];
        // sum over alpha_0 in {0, 2}, alpha_1 = 1
        assert_eq!(contract(&t, &[&x, &y], &mut s), -(2.0 * (1.0 + 3.0)));
    }

    #[test]
    fn per_mode_matches_full_sum() {
        let p = 3;
        let t: Vec<f64> = (0..27).map(|i| (i as f64 * 0.37).sin()).collect();
        let mats: Vec<Vec<f64>> = (0..3)
            .map(|d| (0..9).map(|i| ((i + 5 * d) as f64 * 0.71).cos()).collect())
            .collect();
        let got = apply_per_mode(&t, &mats, p);
        for b in 0..27 {
            let bi = [b / 9, (b / 3) % 3, b % 3];
            let mut want = 0.0;
            for a in 0..27 {
                let ai = [a / 9, (a / 3) % 3, a % 3];
                want += t[a] * (0..3).map(|d| mats[d][bi[d] * p + ai[d]]).product::<f64>();
            }
            assert!((got[b] - want).abs() < 1e-12);
        }
    }
}
