//! The projective special linear groups L2(q) for odd prime powers q,
//! selected small subgroups of them, and coset scanners.
//!
//! Elements are determinant-1 2x2 matrices over F_q taken modulo +-I; the
//! canonical representative of {M, -M} is the one whose first nonzero
//! row-major entry is the packed-least of the pair, chosen uniformly per
//! field, so products canonicalize consistently.

use crate::adequacy::{first_obstructed_coset, CosetObstruction};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::groups::{FiniteGroup, GroupElement};
use crate::linalg::Matrix;
use std::sync::Arc;

use super::certificate::{certify_coset, ObstructionCertificate, MODE_EXPLICIT};

/// Factor q as p^e for an odd prime p, if it has that form.
pub fn odd_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 3 || q % 2 == 0 {
        return None;
    }
    let mut p = 3u64;
    while p * p <= q {
        if q % p == 0 {
            let mut rest = q;
            let mut e = 0u32;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            return if rest == 1 { Some((p, e)) } else { None };
        }
        p += 2;
    }
    Some((q, 1))
}

/// |L2(q)| = q(q^2 - 1)/2 for odd q.
pub fn psl2_order(q: u64) -> u64 {
    q * (q * q - 1) / 2
}

/// Construct L2(q) for an odd prime power q, refusing if the order formula
/// already exceeds the cap. Generated by the upper transvections over a
/// field basis together with the rotation by the antidiagonal involution.
pub fn psl2(q: u64, cap: u64) -> Result<Arc<FiniteGroup>> {
    let (p0, e) = odd_prime_power(q)
        .ok_or_else(|| Error::InvalidInput(format!("{} is not an odd prime power", q)))?;
    if q > 1 << 20 {
        return Err(Error::InvalidInput("q too large".into()));
    }
    let expected = psl2_order(q);
    if expected > cap {
        return Err(Error::CapExceeded { cap });
    }
    let field = Field::new(p0, e)?;
    // Powers of a primitive element form an F_p0 basis because its minimal
    // polynomial has degree e.
    let mut gens = Vec::with_capacity(e as usize + 1);
    let gamma = field.element_of_order(q - 1)?;
    for i in 0..e {
        let b = field.pow(gamma, i as u64)?;
        let mat = Matrix::from_scalars(
            &field,
            &[
                vec![field.one(), b],
                vec![field.zero(), field.one()],
            ],
        )?;
        gens.push(GroupElement::projective_matrix(mat)?);
    }
    gens.push(GroupElement::projective_matrix(Matrix::from_i64(
        &field,
        &[&[0, -1], &[1, 0]],
    )?)?);
    let group = Arc::new(FiniteGroup::enumerate(gens, cap)?);
    if group.order() != expected {
        return Err(Error::Precondition(format!(
            "L2({}) enumeration found {} elements, expected {}",
            q,
            group.order(),
            expected
        )));
    }
    Ok(group)
}

/// The dihedral subgroup of order 2p generated by a diagonal torus element of
/// projective order p and the antidiagonal involution, as sorted indices.
pub fn dihedral_subgroup_psl2(t: &Arc<FiniteGroup>, q: u64, p: u64) -> Result<Vec<u32>> {
    let (p0, e) = odd_prime_power(q)
        .ok_or_else(|| Error::InvalidInput(format!("{} is not an odd prime power", q)))?;
    if p < 3 || (q - 1) % p != 0 {
        return Err(Error::InvalidInput(format!(
            "need an odd prime p with p | q - 1; got p = {}, q = {}",
            p, q
        )));
    }
    let field = Field::new(p0, e)?;
    let a = field.element_of_order(p)?;
    let torus = Matrix::from_scalars(
        &field,
        &[
            vec![a, field.zero()],
            vec![field.zero(), field.inv(a)?],
        ],
    )?;
    let flip = Matrix::from_i64(&field, &[&[0, 1], &[-1, 0]])?;
    let ti = t
        .index_of(&GroupElement::projective_matrix(torus)?)
        .ok_or(Error::NotSubgroup)?;
    let wi = t
        .index_of(&GroupElement::projective_matrix(flip)?)
        .ok_or(Error::NotSubgroup)?;
    // Dihedral relation: conjugating the rotation by the flip inverts it.
    let conj = t.mul_indices(t.mul_indices(wi, ti), t.inverse_index(wi));
    if conj != t.inverse_index(ti) {
        return Err(Error::Precondition(
            "flip does not invert the torus element".into(),
        ));
    }
    let sub = t.subgroup_indices(&[ti, wi]);
    if sub.len() as u64 != 2 * p {
        return Err(Error::Precondition(format!(
            "expected a subgroup of order {}, closed to {}",
            2 * p,
            sub.len()
        )));
    }
    let profile = t.order_profile(&sub);
    let ok = profile.get(&1) == Some(&1)
        && profile.get(&2) == Some(&p)
        && profile.get(&p) == Some(&(p - 1))
        && profile.len() == 3;
    if !ok {
        return Err(Error::Precondition(format!(
            "order profile {:?} is not dihedral of order {}",
            profile,
            2 * p
        )));
    }
    Ok(sub)
}

/// Find a subgroup isomorphic to A4 by scanning pairs (involution, order-3
/// element) in ascending index order and closing each candidate pair with an
/// early size bound. The full group itself is never accepted.
pub fn a4_subgroup_psl2(t: &Arc<FiniteGroup>) -> Result<Vec<u32>> {
    let n = t.order() as u32;
    for u in 0..n {
        if t.element_order(u) != 2 {
            continue;
        }
        for v in 0..n {
            if t.element_order(v) != 3 {
                continue;
            }
            let Some(closure) = bounded_closure(t, &[u, v], 12) else {
                continue;
            };
            if closure.len() != 12 || closure.len() as u64 == t.order() {
                continue;
            }
            let profile = t.order_profile(&closure);
            if profile.get(&1) == Some(&1)
                && profile.get(&2) == Some(&3)
                && profile.get(&3) == Some(&8)
            {
                return Ok(closure);
            }
        }
        // Every involution of L2(q) is conjugate to the first one, so if any
        // A4 exists, a partner v exists already for the least involution.
        break;
    }
    Err(Error::SearchExhausted(
        "no A4 subgroup found (group too small or scan empty)".into(),
    ))
}

/// BFS closure of the given indices, abandoned once it exceeds `limit`.
fn bounded_closure(t: &Arc<FiniteGroup>, gens: &[u32], limit: usize) -> Option<Vec<u32>> {
    let mut list = vec![0u32];
    let mut seen: Vec<u32> = vec![0];
    let mut at = 0usize;
    while at < list.len() {
        let x = list[at];
        at += 1;
        for &s in gens {
            let y = t.mul_indices(s, x);
            if let Err(pos) = seen.binary_search(&y) {
                if list.len() >= limit {
                    return None;
                }
                seen.insert(pos, y);
                list.push(y);
            }
        }
    }
    Some(seen)
}

/// Least-representative coset xK of the subgroup (given as sorted indices)
/// whose members all have order divisible by p, if one exists.
pub fn scan_coset_witness(
    t: &Arc<FiniteGroup>,
    t1: &[u32],
    p: u64,
    threads: usize,
) -> Result<Option<CosetObstruction>> {
    first_obstructed_coset(t, t1, p, threads)
}

/// Coset scan against a Sylow p-subgroup.
pub fn scan_sylow_coset(
    t: &Arc<FiniteGroup>,
    p: u64,
    threads: usize,
) -> Result<Option<CosetObstruction>> {
    if t.order() % p != 0 {
        return Err(Error::InvalidInput(
            "p must divide the group order for a Sylow coset scan".into(),
        ));
    }
    let sylow = t.sylow_subgroup(p);
    scan_coset_witness(t, &sylow, p, threads)
}

/// Outcome of one q in a family scan over L2(q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyScanOutcome {
    Witness(Box<ObstructionCertificate>),
    Absent,
    CapSkipped { order: u64 },
    NotApplicable { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyScanRecord {
    pub q: u64,
    pub outcome: FamilyScanOutcome,
}

/// Scan L2(q) for q = 3, 5, ... up to q_max: for each group within the cap,
/// look for a Sylow-p coset with no p-regular element. Stops at the first
/// witness when `stop_at_first` is set; earlier records are kept either way.
pub fn scan_psl2_family(
    p: u64,
    q_max: u64,
    cap: u64,
    threads: usize,
    stop_at_first: bool,
) -> Result<Vec<FamilyScanRecord>> {
    let mut out = Vec::new();
    for q in (3..=q_max).step_by(2) {
        if odd_prime_power(q).is_none() {
            continue;
        }
        let order = psl2_order(q);
        if order > cap {
            out.push(FamilyScanRecord {
                q,
                outcome: FamilyScanOutcome::CapSkipped { order },
            });
            continue;
        }
        if order % p != 0 {
            out.push(FamilyScanRecord {
                q,
                outcome: FamilyScanOutcome::NotApplicable {
                    reason: format!("{} does not divide the group order {}", p, order),
                },
            });
            continue;
        }
        let t = psl2(q, cap)?;
        match scan_sylow_coset(&t, p, threads)? {
            Some(obs) => {
                let sylow = t.sylow_subgroup(p);
                let gens = t.small_generating_set(&sylow);
                let cert = certify_coset(MODE_EXPLICIT, p, &t, &gens, &obs, None)?;
                out.push(FamilyScanRecord {
                    q,
                    outcome: FamilyScanOutcome::Witness(Box::new(cert)),
                });
                if stop_at_first {
                    return Ok(out);
                }
            }
            None => out.push(FamilyScanRecord {
                q,
                outcome: FamilyScanOutcome::Absent,
            }),
        }
    }
    Ok(out)
}
