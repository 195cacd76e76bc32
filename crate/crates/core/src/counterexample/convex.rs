use num_traits::{One, Zero};

use crate::error::{invalid, precondition, Result};
use crate::exact::{int, Rational};

/// `x` as `Σ wᵢ·yᵢ` with binary `yᵢ`, `‖yᵢ‖₁ = ‖x‖₁`, `wᵢ >= 0`, `Σ wᵢ = 1`.
///
/// Each step takes `y` = the top `‖x‖₁` coordinates (ties to the lower index)
/// and the largest `λ` keeping the remainder in `[0,1]ⁿ`; one fractional
/// coordinate becomes integral per step, so there are at most `n + 1` terms.
pub fn convex_decompose(x: &[Rational]) -> Result<Vec<(Rational, Vec<bool>)>> {
    if x.iter().any(|v| *v < int(0) || *v > int(1)) {
        return invalid("coordinates must lie in [0,1]");
    }
    let norm: Rational = x.iter().sum();
    if !norm.is_integer() {
        return precondition(format!("‖x‖₁ = {norm} is not an integer"));
    }
    let n_ones = norm.to_integer().try_into().unwrap_or(usize::MAX);
    let mut cur: Vec<Rational> = x.to_vec();
    let mut rest = Rational::one();
    let mut out = Vec::new();
    loop {
        let mut order: Vec<usize> = (0..cur.len()).collect();
        order.sort_by(|&a, &b| cur[b].cmp(&cur[a]).then(a.cmp(&b)));
        let mut y = vec![false; cur.len()];
        for &i in &order[..n_ones] {
            y[i] = true;
        }
        let inside = order[..n_ones].iter().map(|&i| cur[i].clone()).min().unwrap_or_else(Rational::one);
        let outside = order[n_ones..].iter().map(|&i| int(1) - &cur[i]).min().unwrap_or_else(Rational::one);
        let lambda = inside.min(outside);
        if lambda.is_one() {
            out.push((rest, y));
            return Ok(out);
        }
        out.push((&rest * &lambda, y.clone()));
        let keep = int(1) - &lambda;
        for (c, &b) in cur.iter_mut().zip(&y) {
            let v = if b { &*c - &lambda } else { c.clone() };
            *c = v / &keep;
        }
        rest *= keep;
    }
}

/// `Σ wᵢ·yᵢ` coordinatewise.
pub fn recombine(terms: &[(Rational, Vec<bool>)], n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n];
    for (w, y) in terms {
        for (o, &b) in out.iter_mut().zip(y) {
            if b {
                *o += w;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn symmetric_halves() {
        let t = convex_decompose(&[ratio(1, 2), ratio(1, 2)]).unwrap();
        assert_eq!(t, vec![(ratio(1, 2), vec![true, false]), (ratio(1, 2), vec![false, true])]);
    }

    #[test]
    fn binary_is_one_term() {
        let t = convex_decompose(&[int(1), int(0), int(1)]).unwrap();
        assert_eq!(t, vec![(int(1), vec![true, false, true])]);
    }

    #[test]
    fn three_quarters_recombine() {
        let x = [ratio(3, 4), ratio(1, 2), ratio(3, 4)];
        let t = convex_decompose(&x).unwrap();
        assert_eq!(recombine(&t, 3), x.to_vec());
        assert_eq!(t.iter().map(|(w, _)| w.clone()).sum::<Rational>(), int(1));
        assert!(t.iter().all(|(_, y)| y.iter().filter(|&&b| b).count() == 2));
    }

    #[test]
    fn fractional_norm_is_rejected() {
        assert!(convex_decompose(&[ratio(1, 2), ratio(1, 3)]).is_err());
    }
}
