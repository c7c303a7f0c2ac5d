//! Generalized wreath-product modules: a base L^m (one copy of a cyclic
//! group L per coset of T1 in T) extended by T permuting the copies, with an
//! induced module of dimension m. When some coset of T1 in T has no
//! p-regular element, neither does the corresponding coset upstairs, so the
//! module is never weakly adequate. Small instances are built explicitly as
//! monomial matrix groups; large ones are certified through the quotient.

use crate::adequacy::{
    algebra_span_rank, first_obstructed_coset, is_absolutely_irreducible, CosetObstruction,
    ElementFilter,
};
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, GroupElement};
use crate::modrep::Representation;
use std::sync::Arc;

use super::certificate::{
    certify_coset, ImplicitProduct, ObstructionCertificate, MODE_EXPLICIT, MODE_QUOTIENT_LIFTED,
};

/// Explicit construction is attempted only below this many group elements.
pub const EXPLICIT_WREATH_LIMIT: u64 = 2_000_000;

/// Verification results attached to an explicit build.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WreathChecks {
    pub faithful: bool,
    pub absolutely_irreducible: bool,
    pub p_regular_span: usize,
    pub full_span: usize,
}

pub enum WreathOutcome {
    Explicit {
        group: Arc<FiniteGroup>,
        module: Representation,
        /// Indices of the inducing subgroup K (base times T1) in the group.
        inducing_subgroup: Vec<u32>,
        copies: u64,
        checks: WreathChecks,
        certificate: ObstructionCertificate,
    },
    Implicit {
        base_order: u64,
        copies: u64,
        top_order: u64,
        /// The obstructed coset at the quotient level.
        witness: CosetObstruction,
        certificate: ObstructionCertificate,
    },
}

/// Build (or certify) the wreath instance for a cyclic base L with faithful
/// one-dimensional module w, a top group T with core-free subgroup T1 (as
/// sorted indices in T), at the prime p.
pub fn build_wreath_example(
    l: &Arc<FiniteGroup>,
    w: &Representation,
    t: &Arc<FiniteGroup>,
    t1: &[u32],
    p: u64,
    cap: u64,
    threads: usize,
) -> Result<WreathOutcome> {
    if !Arc::ptr_eq(w.group(), l) {
        return Err(Error::Precondition(
            "the base module must live on the base group".into(),
        ));
    }
    if w.dim() != 1 || !w.is_faithful() {
        return Err(Error::Precondition(
            "the base module must be a faithful character (which forces the base cyclic)".into(),
        ));
    }
    if w.field().p() != p {
        return Err(Error::InvalidInput(
            "the module field characteristic must be p".into(),
        ));
    }
    if !l.is_generated_by_p_regular(p, threads) || !t.is_generated_by_p_regular(p, threads) {
        return Err(Error::Precondition(
            "both the base and the top group must be generated by p-regular elements".into(),
        ));
    }
    validate_subgroup(t, t1)?;
    if t1.len() as u64 == t.order() {
        return Err(Error::InvalidInput(
            "the inducing subgroup is the whole top group; no proper coset exists".into(),
        ));
    }
    if t.subgroup_core(t1) != vec![0] {
        return Err(Error::Precondition(
            "the subgroup is not core-free in the top group".into(),
        ));
    }
    let witness = first_obstructed_coset(t, t1, p, threads)?.ok_or_else(|| {
        Error::SearchExhausted(
            "every coset of the subgroup has a p-regular element; construction refused".into(),
        )
    })?;

    let ell = l.order();
    let m = t.order() / t1.len() as u64;
    let explicit_size = ell
        .checked_pow(u32::try_from(m).unwrap_or(u32::MAX))
        .and_then(|b| b.checked_mul(t.order()));
    let t1_gens = t.small_generating_set(t1);

    match explicit_size {
        Some(size) if size <= EXPLICIT_WREATH_LIMIT.min(cap) => {
            build_explicit(l, w, t, t1, &t1_gens, p, m, size, threads)
        }
        _ => {
            let certificate = certify_coset(
                MODE_QUOTIENT_LIFTED,
                p,
                t,
                &t1_gens,
                &witness,
                Some(ImplicitProduct {
                    base_order: ell,
                    copies: m,
                    top_order: t.order(),
                }),
            )?;
            Ok(WreathOutcome::Implicit {
                base_order: ell,
                copies: m,
                top_order: t.order(),
                witness,
                certificate,
            })
        }
    }
}

fn validate_subgroup(t: &Arc<FiniteGroup>, t1: &[u32]) -> Result<()> {
    if t1.first() != Some(&0)
        || !t1.windows(2).all(|w| w[0] < w[1])
        || t1.last().map(|&x| x as u64 >= t.order()) == Some(true)
        || t.order() % t1.len() as u64 != 0
        || t.subgroup_indices(t1) != t1
    {
        return Err(Error::InvalidInput(
            "the inducing subgroup must be a sorted, closed index list containing 0".into(),
        ));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn build_explicit(
    l: &Arc<FiniteGroup>,
    w: &Representation,
    t: &Arc<FiniteGroup>,
    t1: &[u32],
    t1_gens: &[u32],
    p: u64,
    m: u64,
    size: u64,
    threads: usize,
) -> Result<WreathOutcome> {
    let k = w.field().clone();
    let ell = l.order();
    // The image of a generator of L under the character.
    let gen_of_l = (0..l.order() as u32)
        .find(|&i| l.element_order(i) == ell)
        .ok_or_else(|| Error::Precondition("base group is not cyclic".into()))?;
    let zeta = w.image(gen_of_l).at(0, 0);

    // Slot structure: one slot per coset of T1, numbered by ascending
    // representative; element x sends slot j to the coset of x * rep_j.
    let cosets = t.left_cosets(t1);
    let m_us = m as usize;
    debug_assert_eq!(cosets.len(), m_us);
    let mut coset_of = vec![0u32; t.order() as usize];
    for (j, coset) in cosets.iter().enumerate() {
        for &e in coset {
            coset_of[e as usize] = j as u32;
        }
    }
    let slot_perm = |x: u32| -> Vec<u32> {
        (0..m_us)
            .map(|j| coset_of[t.mul_indices(x, cosets[j][0]) as usize])
            .collect()
    };
    let ones = vec![k.one(); m_us];
    let perm_monomial = |x: u32| -> Result<GroupElement> {
        GroupElement::monomial(&k, slot_perm(x), ones.clone())
    };
    let zeta_at = |slot: usize| -> Result<GroupElement> {
        let mut scalars = ones.clone();
        scalars[slot] = zeta;
        GroupElement::monomial(&k, (0..m_us as u32).collect(), scalars)
    };

    let mut gens = vec![zeta_at(0)?];
    for s in 0..t.generator_count() {
        gens.push(perm_monomial(t.generator_index(s))?);
    }
    let group = Arc::new(FiniteGroup::enumerate(gens, size)?);
    if group.order() != size {
        return Err(Error::Precondition(format!(
            "wreath product closed to {} elements, expected {}",
            group.order(),
            size
        )));
    }

    let module = Representation::natural(&group, &k)?;
    let checks = WreathChecks {
        faithful: module.is_faithful(),
        absolutely_irreducible: is_absolutely_irreducible(&module, threads)?,
        p_regular_span: algebra_span_rank(&module, ElementFilter::PRegular(p), threads)?,
        full_span: algebra_span_rank(&module, ElementFilter::All, threads)?,
    };
    if !checks.faithful || !checks.absolutely_irreducible {
        return Err(Error::Precondition(format!(
            "explicit wreath module failed verification: {:?}",
            checks
        )));
    }
    if checks.p_regular_span == module.dim() * module.dim() {
        return Err(Error::Precondition(
            "p-regular span is unexpectedly full on the wreath module".into(),
        ));
    }

    // K = (full base) . T1, generated by one character slot per position and
    // the T1 permutations.
    let mut k_gen_indices = Vec::with_capacity(m_us + t1_gens.len());
    for slot in 0..m_us {
        k_gen_indices.push(
            group
                .index_of(&zeta_at(slot)?)
                .ok_or(Error::NotSubgroup)?,
        );
    }
    for &x in t1_gens {
        k_gen_indices.push(
            group
                .index_of(&perm_monomial(x)?)
                .ok_or(Error::NotSubgroup)?,
        );
    }
    let inducing_subgroup = group.subgroup_indices(&k_gen_indices);
    if inducing_subgroup.len() as u64 != ell.pow(m as u32) * t1.len() as u64 {
        return Err(Error::Precondition(
            "inducing subgroup closed to the wrong order".into(),
        ));
    }
    let obstruction = first_obstructed_coset(&group, &inducing_subgroup, p, threads)?
        .ok_or_else(|| {
        Error::Precondition("quotient witness did not lift to an obstructed coset".into())
    })?;
    let certificate = certify_coset(MODE_EXPLICIT, p, &group, &k_gen_indices, &obstruction, None)?;
    Ok(WreathOutcome::Explicit {
        group,
        module,
        inducing_subgroup,
        copies: m,
        checks,
        certificate,
    })
}
