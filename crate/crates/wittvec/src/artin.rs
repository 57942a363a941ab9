//! Ghost-constant vectors and Teichmüller fixed points over number fields.
//!
//! `(f, f, f, …)` is the ghost vector of a bounded Witt vector exactly when
//! `f` lies in the ring of integers of the subfield fixed by Frobenius,
//! localized at `p`. Finite depth only gives evidence for this.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::norm::ExtNorm;
use crate::rings::{Gaussian, GaussianKind, Gi, NormedRing};
use crate::witt::GhostVec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Growth {
    Bounded,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub field: String,
    pub p: u64,
    pub f: String,
    pub depth: usize,
    /// `|x_{p^j}|^{1/p^j}` for `j = 0..=depth`.
    pub profile: Vec<ExtNorm>,
    pub verdict: Growth,
}

/// Unghosts `(f, …, f)` of length `p^N` and records the normalized
/// component norms.
pub fn ghost_constant_profile<R: NormedRing>(ring: &R, f: &R::Elem, depth: usize) -> Result<InvariantReport> {
    let p = ring.p();
    let x = GhostVec::new(ring.clone(), vec![f.clone(); depth + 1])?.unghost()?;
    let profile = x
        .comps()
        .iter()
        .enumerate()
        .map(|(j, c)| Ok(ring.norm(c)?.root(p.pow(j as u32))))
        .collect::<Result<Vec<_>>>()?;
    let verdict = if profile.iter().all(|n| *n <= ExtNorm::one()) { Growth::Bounded } else { Growth::Unbounded };
    Ok(InvariantReport { field: ring.name(), p, f: ring.format(f), depth, profile, verdict })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub report: InvariantReport,
    pub predicted: Growth,
}

impl Classification {
    pub fn matches(&self) -> bool {
        self.report.verdict == self.predicted
    }
}

/// Integrality at every place above `p` of the fixed field: `ℚ(i)` itself
/// when `p` splits, `ℚ` when `p` is inert.
pub fn predicted_growth(field: &Gaussian, f: &Gi) -> Growth {
    let integral = field.valuations(f).iter().all(|v| v.finite().map_or(true, |r| !r.is_negative()));
    let rational = match field.kind() {
        GaussianKind::Inert => f.im.is_zero(),
        _ => true,
    };
    if integral && rational {
        Growth::Bounded
    } else {
        Growth::Unbounded
    }
}

/// Compares the observed growth of `(f, …, f)` with the prediction over
/// `ℚ(i)` at `p ∈ {3, 5}`.
pub fn invariant_classify(field: &Gaussian, f: &Gi, depth: usize) -> Result<Classification> {
    let p = field.p();
    if p != 3 && p != 5 {
        return Err(Error::UnsupportedField(format!("Q(i) at p = {}", p)));
    }
    if depth > 4 {
        return Err(Error::Unsupported(format!("depth {} above 4", depth)));
    }
    let report = ghost_constant_profile(field, f, depth)?;
    Ok(Classification { report, predicted: predicted_growth(field, f) })
}

/// `r^p = r`, i.e. the ghost vector of `[r]` is constant.
pub fn teichmuller_phi_invariance<R: NormedRing>(ring: &R, r: &R::Elem) -> bool {
    ring.pow(r, ring.p()) == *r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::rat;
    use crate::rings::Rationals;
    use crate::witt::WittVec;

    #[test]
    fn rational_profiles() {
        let q = Rationals::new(2);
        assert_eq!(ghost_constant_profile(&q, &q.from_i64(3), 3).unwrap().verdict, Growth::Bounded);
        let third = q.parse("1/3").unwrap();
        assert_eq!(ghost_constant_profile(&q, &third, 3).unwrap().verdict, Growth::Bounded);
        let half = q.parse("1/2").unwrap();
        let r = ghost_constant_profile(&q, &half, 2).unwrap();
        assert_eq!(r.verdict, Growth::Unbounded);
        assert_eq!(r.profile[1], ExtNorm::p_pow(rat(3, 2)));
    }

    #[test]
    fn gaussian_units() {
        let g5 = Gaussian::new(5);
        let g3 = Gaussian::new(3);
        let i = g5.i();
        assert!(teichmuller_phi_invariance(&g5, &i));
        assert!(!teichmuller_phi_invariance(&g3, &i));
        assert!(teichmuller_phi_invariance(&g3, &g3.one()));
        let c = invariant_classify(&g5, &i, 3).unwrap();
        assert_eq!(c.report.verdict, Growth::Bounded);
        assert!(c.matches());
        let t = WittVec::teichmuller(&g5, &i, 3);
        assert_eq!(GhostVec::new(g5.clone(), vec![i.clone(); 4]).unwrap().unghost().unwrap(), t);
        let c = invariant_classify(&g3, &i, 2).unwrap();
        assert_eq!(c.report.verdict, Growth::Unbounded);
        assert!(c.matches());
        let fifth = g5.parse("1/5").unwrap();
        assert_eq!(invariant_classify(&g5, &fifth, 2).unwrap().report.verdict, Growth::Unbounded);
        assert!(matches!(invariant_classify(&Gaussian::new(7), &i, 2), Err(Error::UnsupportedField(_))));
    }
}
