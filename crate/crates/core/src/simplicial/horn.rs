//! Horn problems, horn filling, and the levelwise Kan fibration check.
//!
//! A horn problem of dimension `n` with open face `k` is a tuple of
//! `(n-1)`-simplices, one per face index other than `k`, satisfying the
//! matching conditions `d_i x_j = d_{j-1} x_i` for `i < j`. The fibration
//! check enumerates every such tuple in the source, every compatible filler
//! of the image horn in the target, and asks for a filler upstairs lying
//! over it.

use super::{Presentation, SimplexRef, SimplicialMap};
use crate::budget::{Budget, BudgetExhausted};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HornError {
    #[error("face {0} must be present")]
    MissingFace(usize),
    #[error("face {0} must be absent (it is the open face)")]
    UnexpectedFace(usize),
    #[error("face {0} has wrong dimension")]
    FaceDimension(usize),
    #[error("matching condition fails between faces {0} and {1}")]
    Matching(usize, usize),
}

/// A horn to fill: all faces of an `n`-simplex except face `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HornProblem {
    pub n: usize,
    pub k: usize,
    /// Length `n + 1`, `None` exactly at position `k`.
    pub faces: Vec<Option<SimplexRef>>,
}

impl HornProblem {
    pub fn new(n: usize, k: usize, faces: Vec<Option<SimplexRef>>) -> Self {
        HornProblem { n, k, faces }
    }

    /// Structural and matching validation against a presentation.
    pub fn validate(&self, p: &Presentation) -> Result<(), HornError> {
        assert!(self.n >= 1 && self.k <= self.n);
        for i in 0..=self.n {
            match &self.faces.get(i).cloned().flatten() {
                None if i != self.k => return Err(HornError::MissingFace(i)),
                Some(_) if i == self.k => return Err(HornError::UnexpectedFace(i)),
                Some(f) if f.dim() != self.n - 1 => return Err(HornError::FaceDimension(i)),
                _ => {}
            }
        }
        for j in 1..=self.n {
            for i in 0..j {
                if i == self.k || j == self.k {
                    continue;
                }
                let xi = self.faces[i].as_ref().unwrap();
                let xj = self.faces[j].as_ref().unwrap();
                if self.n >= 2 && p.face(xj, i) != p.face(xi, j - 1) {
                    return Err(HornError::Matching(i, j));
                }
            }
        }
        Ok(())
    }
}

/// Finds the canonically least filler of a horn, if any.
pub fn fill_horn(p: &Presentation, h: &HornProblem) -> Option<SimplexRef> {
    debug_assert!(h.validate(p).is_ok());
    if h.n > p.truncation() {
        return None;
    }
    p.simplices(h.n).into_iter().find(|z| {
        (0..=h.n).all(|i| match &h.faces[i] {
            Some(f) => &p.face(z, i) == f,
            None => true,
        })
    })
}

/// One unfillable lifting instance, as a re-checkable witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationFailure {
    pub n: usize,
    pub k: usize,
    pub faces: Vec<Option<SimplexRef>>,
    pub base_filler: SimplexRef,
}

/// Result of the levelwise fibration check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationReport {
    /// Largest dimension actually examined.
    pub dim_checked: usize,
    /// Number of (horn, base filler) instances examined.
    pub instances: u64,
    pub failure: Option<FibrationFailure>,
}

impl FibrationReport {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks the right lifting property of `p` against all horn inclusions in
/// dimensions `1 ..= d`, clamped to the truncations involved.
pub fn is_kan_fibration_upto(
    p: &SimplicialMap,
    d: usize,
    budget: &mut Budget,
) -> Result<FibrationReport, BudgetExhausted> {
    let src = p.source.as_ref();
    let tgt = p.target.as_ref();
    let cap = d.min(src.truncation()).min(tgt.truncation());
    let mut instances = 0u64;
    for n in 1..=cap {
        let lower = src.simplices(n - 1);
        let uppers = src.simplices(n);
        let bases = tgt.simplices(n);
        // Cache faces and images of candidates.
        let lower_faces: Vec<Vec<SimplexRef>> = lower
            .iter()
            .map(|x| if n >= 2 { (0..n).map(|i| src.face(x, i)).collect() } else { Vec::new() })
            .collect();
        let lower_images: Vec<SimplexRef> = lower.iter().map(|x| p.apply(x)).collect();
        let upper_faces: Vec<Vec<SimplexRef>> =
            uppers.iter().map(|z| (0..=n).map(|i| src.face(z, i)).collect()).collect();
        let upper_images: Vec<SimplexRef> = uppers.iter().map(|z| p.apply(z)).collect();
        let base_faces: Vec<Vec<SimplexRef>> =
            bases.iter().map(|z| (0..=n).map(|i| tgt.face(z, i)).collect()).collect();
        for k in 0..=n {
            let positions: Vec<usize> = (0..=n).filter(|&i| i != k).collect();
            let mut chosen: Vec<usize> = Vec::with_capacity(n);
            if let Some(fail) = search_horns(
                n,
                k,
                &positions,
                &mut chosen,
                &lower,
                &lower_faces,
                &lower_images,
                &uppers,
                &upper_faces,
                &upper_images,
                &bases,
                &base_faces,
                &mut instances,
                budget,
            )? {
                return Ok(FibrationReport { dim_checked: cap, instances, failure: Some(fail) });
            }
        }
    }
    Ok(FibrationReport { dim_checked: cap, instances, failure: None })
}

/// Kan condition on a single presentation: lifting against the map to a
/// point, which only constrains fillers by their faces.
pub fn is_kan_complex_upto(
    p: &Presentation,
    d: usize,
    budget: &mut Budget,
) -> Result<FibrationReport, BudgetExhausted> {
    let point = std::sync::Arc::new(super::standard_simplex(0, p.truncation()));
    let src = std::sync::Arc::new(p.clone());
    let vertex = SimplexRef::generator(super::GenId { dim: 0, idx: 0 });
    let collapse = SimplicialMap::constant(src, point, vertex);
    is_kan_fibration_upto(&collapse, d, budget)
}

#[allow(clippy::too_many_arguments)]
fn search_horns(
    n: usize,
    k: usize,
    positions: &[usize],
    chosen: &mut Vec<usize>,
    lower: &[SimplexRef],
    lower_faces: &[Vec<SimplexRef>],
    lower_images: &[SimplexRef],
    uppers: &[SimplexRef],
    upper_faces: &[Vec<SimplexRef>],
    upper_images: &[SimplexRef],
    bases: &[SimplexRef],
    base_faces: &[Vec<SimplexRef>],
    instances: &mut u64,
    budget: &mut Budget,
) -> Result<Option<FibrationFailure>, BudgetExhausted> {
    if chosen.len() == positions.len() {
        // The horn is complete; try every compatible base filler.
        let face_at = |i: usize| -> Option<usize> {
            positions.iter().position(|&p| p == i).map(|slot| chosen[slot])
        };
        for (bi, _zb) in bases.iter().enumerate() {
            budget.tick()?;
            let compatible = positions
                .iter()
                .all(|&i| base_faces[bi][i] == lower_images[face_at(i).unwrap()]);
            if !compatible {
                continue;
            }
            *instances += 1;
            let found = (0..uppers.len()).any(|ui| {
                upper_images[ui] == bases[bi]
                    && positions
                        .iter()
                        .all(|&i| upper_faces[ui][i] == lower[face_at(i).unwrap()])
            });
            if !found {
                let mut faces = vec![None; n + 1];
                for &i in positions {
                    faces[i] = Some(lower[face_at(i).unwrap()].clone());
                }
                return Ok(Some(FibrationFailure {
                    n,
                    k,
                    faces,
                    base_filler: bases[bi].clone(),
                }));
            }
        }
        return Ok(None);
    }
    let slot = chosen.len();
    let i = positions[slot];
    'candidates: for (ci, _cand) in lower.iter().enumerate() {
        budget.tick()?;
        // Matching against already chosen faces: for j < i in the horn,
        // d_j x_i = d_{i-1} x_j.
        if n >= 2 {
            for (prev_slot, &j) in positions[..slot].iter().enumerate() {
                let xj = chosen[prev_slot];
                if lower_faces[ci][j] != lower_faces[xj][i - 1] {
                    continue 'candidates;
                }
            }
        }
        chosen.push(ci);
        let r = search_horns(
            n, k, positions, chosen, lower, lower_faces, lower_images, uppers, upper_faces,
            upper_images, bases, base_faces, instances, budget,
        )?;
        chosen.pop();
        if r.is_some() {
            return Ok(r);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::super::{circle, codiscrete_nerve, group_nerve, standard_simplex};
    use super::*;

    fn z2_nerve(trunc: usize) -> Presentation {
        group_nerve(&["e", "g"], 0, &[vec![0, 1], vec![1, 0]], trunc)
    }

    #[test]
    fn fill_inner_horn_in_group_nerve() {
        let n = z2_nerve(2);
        let g = SimplexRef::generator(n.generator_by_name("[g]").unwrap());
        let h = HornProblem::new(2, 1, vec![Some(g.clone()), None, Some(g.clone())]);
        h.validate(&n).unwrap();
        let z = fill_horn(&n, &h).expect("composable chain has a filler");
        assert_eq!(n.face(&z, 0), g);
        assert_eq!(n.face(&z, 2), g);
        assert_eq!(z, SimplexRef::generator(n.generator_by_name("[g|g]").unwrap()));
    }

    #[test]
    fn group_nerve_is_kan() {
        let n = z2_nerve(3);
        let report = is_kan_complex_upto(&n, 3, &mut Budget::unlimited()).unwrap();
        assert!(report.holds(), "failure: {:?}", report.failure);
        assert!(report.instances > 0);
    }

    #[test]
    fn codiscrete_nerve_is_kan() {
        let e = codiscrete_nerve(&["e", "g"], 3);
        let report = is_kan_complex_upto(&e, 3, &mut Budget::unlimited()).unwrap();
        assert!(report.holds());
    }

    #[test]
    fn standard_simplex_is_not_kan() {
        let d2 = standard_simplex(2, 2);
        let report = is_kan_complex_upto(&d2, 2, &mut Budget::unlimited()).unwrap();
        let fail = report.failure.expect("outer horn is unfillable");
        assert_eq!(fail.n, 2);
    }

    #[test]
    fn circle_is_not_kan() {
        let c = circle(2);
        let report = is_kan_complex_upto(&c, 2, &mut Budget::unlimited()).unwrap();
        assert!(!report.holds());
    }

    #[test]
    fn budget_exhaustion_is_distinct() {
        let n = z2_nerve(3);
        let res = is_kan_complex_upto(&n, 3, &mut Budget::limited(5));
        assert_eq!(res, Err(BudgetExhausted));
    }

    #[test]
    fn fill_horn_returns_canonical_least() {
        // In the codiscrete nerve both [e|g] fillers and degenerate ones can
        // satisfy an inner horn; the least in canonical order wins.
        let e = codiscrete_nerve(&["e", "g"], 2);
        let ee = e.generator_by_name("[e_to_g]").unwrap();
        let edge = SimplexRef::generator(ee);
        let v_e = SimplexRef::generator(e.generator_by_name("[e]").unwrap());
        let h = HornProblem::new(
            2,
            0,
            vec![None, Some(edge.clone()), Some(e.degeneracy(&v_e, 0))],
        );
        h.validate(&e).unwrap();
        let z = fill_horn(&e, &h).unwrap();
        // Every later filler is not smaller.
        for cand in e.simplices(2) {
            let fits = e.face(&cand, 1) == edge && e.face(&cand, 2) == e.degeneracy(&v_e, 0);
            if fits {
                assert!(z <= cand);
            }
        }
    }
}
