//! Adequacy analysis for a representation in characteristic p.
//!
//! The four conditions reported here, for G acting absolutely irreducibly on
//! V over a field k of characteristic p:
//!
//! * c1: the first cohomology of G with trivial coefficients vanishes;
//! * c2: p does not divide dim V;
//! * c3: the first cohomology of G with coefficients in End(V) vanishes;
//! * c4: the images of the p-regular elements span End(V) as a k-space.
//!
//! c4 alone is "weak adequacy". A cheap way to refute it is a left coset of a
//! subgroup containing no p-regular element at all: the span of the p-regular
//! images is then trapped in a proper subspace, so this module also provides
//! a coset scanner that finds such witnesses.

use crate::cohomology::h1_dimension;
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::linalg::SpanAccumulator;
use crate::modrep::Representation;
use crate::par;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Which group elements feed the spanning computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementFilter {
    All,
    PRegular(u64),
}

/// Dimension of the subspace of End(V) spanned by the images of the selected
/// elements. Chunks of the element range are accumulated independently and
/// merged in index order, so the result does not depend on the thread count.
pub fn algebra_span_rank(
    rep: &Representation,
    filter: ElementFilter,
    threads: usize,
) -> Result<usize> {
    let d = rep.dim();
    let ambient = d * d;
    let group = rep.group();
    let order = group.order() as usize;
    let flags: Option<Vec<bool>> = match filter {
        ElementFilter::All => None,
        ElementFilter::PRegular(p) => Some(group.p_regular_flags(p, threads)),
    };
    let t = par::effective_threads(threads);
    let chunks = par::run_partitioned(order, t, |range| -> Result<SpanAccumulator> {
        let mut acc = SpanAccumulator::new(rep.field(), ambient);
        for i in range {
            if let Some(f) = &flags {
                if !f[i] {
                    continue;
                }
            }
            acc.insert_matrix(&rep.image(i as u32))?;
            if acc.is_full() {
                break;
            }
        }
        Ok(acc)
    });
    let mut total = SpanAccumulator::new(rep.field(), ambient);
    for chunk in chunks {
        total.merge(&chunk?)?;
        if total.is_full() {
            break;
        }
    }
    Ok(total.rank())
}

/// Dimension of the space of matrices commuting with every image. Since every
/// group element is a word in the generators, it suffices to solve
/// M X = X M for the generator images M, i.e. to intersect the kernels of
/// the operators M (x) I - I (x) M^T acting on flattened matrices.
pub fn commutant_dimension(rep: &Representation) -> Result<usize> {
    let d = rep.dim();
    let field = rep.field();
    let eye = crate::linalg::Matrix::identity(field, d);
    let mut rows = Vec::with_capacity(rep.group().generator_count() * d * d);
    for s in 0..rep.group().generator_count() {
        let m = rep.gen_image(s);
        let left = m.kronecker(&eye)?;
        let right = eye.kronecker(&m.transpose())?;
        let diff = left.sub(&right)?;
        for r in 0..diff.rows() {
            rows.push((0..diff.cols()).map(|c| diff.at(r, c)).collect::<Vec<_>>());
        }
    }
    let stacked = crate::linalg::Matrix::from_scalars(field, &rows)?;
    Ok(stacked.nullspace().rows())
}

/// True when the image algebra is all of End(V). Decided by the spanning
/// rank; when that route says yes, the commutant must be the scalars, and the
/// disagreement of the two routes is reported as an internal error.
pub fn is_absolutely_irreducible(rep: &Representation, threads: usize) -> Result<bool> {
    let d = rep.dim();
    let full = algebra_span_rank(rep, ElementFilter::All, threads)? == d * d;
    if full && commutant_dimension(rep)? != 1 {
        return Err(Error::Precondition(
            "internal inconsistency: full image algebra with nonscalar commutant".into(),
        ));
    }
    Ok(full)
}

/// Condition c4 on its own: do the p-regular images span End(V)? Requires an
/// absolutely irreducible input.
pub fn is_weakly_adequate(rep: &Representation, p: u64, threads: usize) -> Result<bool> {
    if rep.field().p() != p {
        return Err(Error::InvalidInput(
            "p must equal the coefficient field characteristic".into(),
        ));
    }
    if !is_absolutely_irreducible(rep, threads)? {
        return Err(Error::Precondition(
            "weak adequacy is only defined for absolutely irreducible representations".into(),
        ));
    }
    let d = rep.dim();
    Ok(algebra_span_rank(rep, ElementFilter::PRegular(p), threads)? == d * d)
}

/// Counting screen: fewer than dim^2 candidate spanning elements can never
/// fill End(V).
pub fn cannot_span_by_count(candidates: u64, dim: u64) -> bool {
    candidates < dim * dim
}

/// Number of elements whose order is prime to p.
pub fn count_p_regular(group: &Arc<FiniteGroup>, p: u64, threads: usize) -> u64 {
    group
        .p_regular_flags(p, threads)
        .iter()
        .filter(|&&b| b)
        .count() as u64
}

/// A left coset with no p-regular member, witnessing the failure of c4 for
/// every faithful representation (the p-regular images lie in a union of
/// cosets missing this one, and such a union spans a proper subspace).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetObstruction {
    /// Least element index in the coset, which is also its representative.
    pub rep: u32,
    /// All member indices, ascending.
    pub members: Vec<u32>,
}

fn coset_scan(
    group: &Arc<FiniteGroup>,
    subgroup: &[u32],
    p: u64,
    threads: usize,
    stop_at_first: bool,
) -> Result<Vec<CosetObstruction>> {
    let n = group.order() as usize;
    if subgroup.is_empty() || subgroup[0] != 0 {
        return Err(Error::InvalidInput(
            "subgroup must be listed ascending and contain the identity".into(),
        ));
    }
    if !subgroup.windows(2).all(|w| w[0] < w[1]) || *subgroup.last().unwrap() as usize >= n {
        return Err(Error::InvalidInput(
            "subgroup indices must be strictly increasing and in range".into(),
        ));
    }
    if n % subgroup.len() != 0 || group.subgroup_indices(subgroup) != subgroup {
        return Err(Error::InvalidInput(
            "the given indices are not closed under multiplication".into(),
        ));
    }
    let flags = group.p_regular_flags(p, threads);
    let mut covered = vec![false; n];
    let mut out = Vec::new();
    for rep in 0..n as u32 {
        if covered[rep as usize] {
            continue;
        }
        let mut members: Vec<u32> = subgroup
            .iter()
            .map(|&k| group.mul_indices(rep, k))
            .collect();
        for &m in &members {
            covered[m as usize] = true;
        }
        if !members.iter().any(|&m| flags[m as usize]) {
            members.sort_unstable();
            out.push(CosetObstruction { rep, members });
            if stop_at_first {
                return Ok(out);
            }
        }
    }
    Ok(out)
}

/// All left cosets of the subgroup without a p-regular member, by ascending
/// representative.
pub fn obstructed_cosets(
    group: &Arc<FiniteGroup>,
    subgroup: &[u32],
    p: u64,
    threads: usize,
) -> Result<Vec<CosetObstruction>> {
    coset_scan(group, subgroup, p, threads, false)
}

/// The obstructed coset with the least representative, if any.
pub fn first_obstructed_coset(
    group: &Arc<FiniteGroup>,
    subgroup: &[u32],
    p: u64,
    threads: usize,
) -> Result<Option<CosetObstruction>> {
    Ok(coset_scan(group, subgroup, p, threads, true)?.into_iter().next())
}

/// Truth values of the four conditions. c3 is null when its cohomology
/// computation was skipped for size.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Conditions {
    pub c1: bool,
    pub c2: bool,
    pub c3: Option<bool>,
    pub c4: bool,
}

/// The measured quantities behind the conditions.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Ranks {
    pub full_span: usize,
    pub p_regular_span: usize,
    pub h1_trivial: usize,
    pub h1_adjoint: Option<usize>,
    pub commutant: usize,
}

/// Complete analysis of one representation at one prime.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AdequacyReport {
    pub group_order: u64,
    pub dim: usize,
    pub p: u64,
    pub conditions: Conditions,
    pub ranks: Ranks,
    pub witnesses: Vec<String>,
    pub verdict: String,
    pub skips: Vec<String>,
}

/// Evaluate all four conditions. Inputs that are not absolutely irreducible
/// yield a report (with a witness line), not an error; oversized adjoint
/// cohomology is recorded as a skip and leaves c3 null.
pub fn analyze(rep: &Representation, p: u64, threads: usize) -> Result<AdequacyReport> {
    if rep.field().p() != p {
        return Err(Error::InvalidInput(
            "p must equal the coefficient field characteristic".into(),
        ));
    }
    let d = rep.dim();
    let group = rep.group().clone();
    let mut witnesses = Vec::new();
    let mut skips = Vec::new();

    let full_span = algebra_span_rank(rep, ElementFilter::All, threads)?;
    let abs_irred = full_span == d * d;
    let commutant = commutant_dimension(rep)?;
    if abs_irred && commutant != 1 {
        return Err(Error::Precondition(
            "internal inconsistency: full image algebra with nonscalar commutant".into(),
        ));
    }
    if !abs_irred {
        witnesses.push(format!(
            "image algebra spans only {} of {} dimensions",
            full_span,
            d * d
        ));
    }

    let trivial = Representation::trivial(group.clone(), rep.field());
    let h1_trivial = h1_dimension(&trivial)?.h1;
    let c1 = h1_trivial == 0;
    if !c1 {
        witnesses.push(format!(
            "cohomology with trivial coefficients has dimension {}",
            h1_trivial
        ));
    }

    let c2 = d as u64 % p != 0;
    if !c2 {
        witnesses.push(format!("{} divides the dimension {}", p, d));
    }

    let h1_adjoint = match rep.adjoint().and_then(|adj| h1_dimension(&adj)) {
        Ok(sum) => Some(sum.h1),
        Err(e) if e.is_resource_limit() => {
            skips.push(format!("adjoint cohomology skipped: {}", e));
            None
        }
        Err(e) => return Err(e),
    };
    let c3 = h1_adjoint.map(|h| h == 0);
    if let Some(h) = h1_adjoint {
        if h != 0 {
            witnesses.push(format!(
                "cohomology with adjoint coefficients has dimension {}",
                h
            ));
        }
    }

    let p_regular_span = algebra_span_rank(rep, ElementFilter::PRegular(p), threads)?;
    let c4 = p_regular_span == d * d;
    if !c4 {
        witnesses.push(format!(
            "p-regular images span only {} of {} dimensions",
            p_regular_span,
            d * d
        ));
    }

    let verdict = if !c1 || !c2 || c3 == Some(false) || !c4 {
        "not adequate"
    } else if c1 && c2 && c3 == Some(true) && c4 {
        "adequate"
    } else {
        "partial"
    };

    Ok(AdequacyReport {
        group_order: group.order(),
        dim: d,
        p,
        conditions: Conditions { c1, c2, c3, c4 },
        ranks: Ranks {
            full_span,
            p_regular_span,
            h1_trivial,
            h1_adjoint,
            commutant,
        },
        witnesses,
        verdict: verdict.to_string(),
        skips,
    })
}
