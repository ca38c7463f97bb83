use std::fmt;

use super::benchmark::benchmark_lp;
use super::frank_wolfe::frank_wolfe_aa;
use super::sequential::sequential_sq;
use crate::error::Result;
use crate::model::{evaluate_f, FractionalSolution, Instance};

/// A later candidate must beat the incumbent by more than this to win, so
/// floating-point noise does not override the `Lp, Aa, Sq` tie order.
const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CandidateTag {
    Lp,
    Aa,
    Sq,
}

impl fmt::Display for CandidateTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CandidateTag::Lp => "LP",
            CandidateTag::Aa => "AA",
            CandidateTag::Sq => "SQ",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub tag: CandidateTag,
    pub x: FractionalSolution,
    pub f_value: f64,
}

/// The selected ex-ante solution together with all three candidates and the
/// benchmark value computed on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct ExAnte {
    pub x: FractionalSolution,
    pub tag: CandidateTag,
    pub f_value: f64,
    pub lp_value: f64,
    pub candidates: Vec<Candidate>,
}

/// Computes the LP, Frank-Wolfe and sequential candidates and keeps the one
/// with the largest `f`.
pub fn select_ex_ante(instance: &Instance, m: usize) -> Result<ExAnte> {
    let (bench, (aa, sq)) = rayon::join(
        || benchmark_lp(instance),
        || rayon::join(|| frank_wolfe_aa(instance, m), || sequential_sq(instance)),
    );
    let bench = bench?;
    let lp_value = bench.lp_value;
    let candidates = [
        (CandidateTag::Lp, bench.x_lp),
        (CandidateTag::Aa, aa?),
        (CandidateTag::Sq, sq?),
    ]
    .into_iter()
    .map(|(tag, x)| {
        let f_value = evaluate_f(instance, &x)?;
        Ok(Candidate { tag, x, f_value })
    })
    .collect::<Result<Vec<_>>>()?;

    let mut best = 0;
    for (i, c) in candidates.iter().enumerate().skip(1) {
        if c.f_value > candidates[best].f_value + TIE_TOLERANCE {
            best = i;
        }
    }
    let winner = &candidates[best];
    log::debug!(
        "ex-ante candidates: {}",
        candidates
            .iter()
            .map(|c| format!("{}={:.6}", c.tag, c.f_value))
            .collect::<Vec<_>>()
            .join(" ")
    );
    Ok(ExAnte {
        x: winner.x.clone(),
        tag: winner.tag,
        f_value: winner.f_value,
        lp_value,
        candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::canonical::CanonicalSpec;
    use crate::bounds::random::{random_instance, RandomShape};
    use crate::model::check_feasible;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn i5_selects_sequential() {
        let eps = 0.01;
        let inst = CanonicalSpec::I5 { eps }.build().unwrap();
        let sel = select_ex_ante(&inst, 2).unwrap();
        assert_eq!(sel.tag, CandidateTag::Sq);
        assert_abs_diff_eq!(sel.f_value, 1.0 - eps, epsilon = 1e-9);
        assert_abs_diff_eq!(sel.candidates[0].f_value, 0.75, epsilon = 1e-9);
    }

    #[test]
    fn i6_selects_lp() {
        let inst = CanonicalSpec::I6.build().unwrap();
        let sel = select_ex_ante(&inst, 5).unwrap();
        assert_eq!(sel.tag, CandidateTag::Lp);
        assert_abs_diff_eq!(sel.f_value, 1.315, epsilon = 1e-3);
    }

    #[test]
    fn i4_three_way_tie_goes_to_lp() {
        let (q, eps) = (0.1, 1e-3);
        let inst = CanonicalSpec::I4 { q, eps }.build().unwrap();
        let sel = select_ex_ante(&inst, 100).unwrap();
        for c in &sel.candidates {
            assert_abs_diff_eq!(c.f_value, eps + q, epsilon = 1e-9);
        }
        assert_eq!(sel.tag, CandidateTag::Lp);
    }

    #[test]
    fn lower_bound_against_benchmark() {
        let mut rng = ChaCha8Rng::seed_from_u64(2718);
        let floor = 1.0 - (-1.0f64).exp();
        for _ in 0..25 {
            let inst = random_instance(&mut rng, &RandomShape::new(5, 4, 10));
            let sel = select_ex_ante(&inst, 20).unwrap();
            assert!(sel.f_value >= floor * sel.lp_value - 1e-6);
            for c in &sel.candidates {
                assert!(check_feasible(&inst, &c.x).unwrap().is_empty());
                assert!(c.f_value <= sel.lp_value + 1e-6);
            }
        }
    }
}
