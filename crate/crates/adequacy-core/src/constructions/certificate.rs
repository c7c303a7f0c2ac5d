//! Self-contained, replayable evidence that one coset blocks weak adequacy.
//!
//! A certificate pins down a group by generator bytes, a subgroup K by
//! generator bytes, a witness element x, and the full membership list of the
//! coset xK together with each member's order. Replay reconstructs K by
//! closure, recomputes the coset, and re-proves every order divisibility
//! claim by direct powering — no group enumeration and no trust in the
//! producer. In quotient-lifted mode the scanned group is a quotient of the
//! (too large) group of interest; element orders only grow under preimages,
//! so p-divisibility certified downstairs holds upstairs.

use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, GroupElement, ShapeDescriptor};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::sync::Arc;

use crate::adequacy::CosetObstruction;

/// One coset member with its certified order.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertifiedMember {
    /// Hex of the element's canonical byte encoding.
    pub element: String,
    pub order: u64,
}

/// Shape of the group the certificate is really about when it is only
/// reachable through a quotient: base^copies extended by the scanned group.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ImplicitProduct {
    pub base_order: u64,
    pub copies: u64,
    pub top_order: u64,
}

/// Replayable record of a coset with no p-regular member.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ObstructionCertificate {
    /// "explicit" when the scanned group is the group of interest,
    /// "quotient-lifted" when it is a quotient of it.
    pub mode: String,
    pub p: u64,
    pub shape: ShapeDescriptor,
    pub scanned_group_order: u64,
    pub group_generators: Vec<String>,
    pub subgroup_generators: Vec<String>,
    pub witness: String,
    pub members: Vec<CertifiedMember>,
    pub implicit_group: Option<ImplicitProduct>,
}

pub const MODE_EXPLICIT: &str = "explicit";
pub const MODE_QUOTIENT_LIFTED: &str = "quotient-lifted";

fn hex_of(el: &GroupElement) -> String {
    hex::encode(el.canonical_bytes())
}

/// Build a certificate from a scanned group, the generator indices of the
/// obstructing subgroup, and a scan result. Re-checks p-divisibility of every
/// member order before emitting.
pub fn certify_coset(
    mode: &str,
    p: u64,
    group: &Arc<FiniteGroup>,
    subgroup_gen_indices: &[u32],
    obstruction: &CosetObstruction,
    implicit_group: Option<ImplicitProduct>,
) -> Result<ObstructionCertificate> {
    let shape = group.generators()[0]
        .shape()
        .ok_or_else(|| Error::InvalidInput("group elements have no serializable shape".into()))?;
    let mut members = Vec::with_capacity(obstruction.members.len());
    for &m in &obstruction.members {
        let order = group.element_order(m);
        if order % p != 0 {
            return Err(Error::Precondition(format!(
                "coset member {} has order {} not divisible by {}",
                m, order, p
            )));
        }
        members.push(CertifiedMember {
            element: hex_of(group.element(m)),
            order,
        });
    }
    Ok(ObstructionCertificate {
        mode: mode.to_string(),
        p,
        shape,
        scanned_group_order: group.order(),
        group_generators: group.generators().iter().map(hex_of).collect(),
        subgroup_generators: subgroup_gen_indices
            .iter()
            .map(|&i| hex_of(group.element(i)))
            .collect(),
        witness: hex_of(group.element(obstruction.rep)),
        members,
        implicit_group: implicit_group.map(|i| {
            debug_assert_eq!(mode, MODE_QUOTIENT_LIFTED);
            i
        }),
    })
}

fn decode_hex_element(shape: &ShapeDescriptor, s: &str) -> Result<GroupElement> {
    let bytes = hex::decode(s)
        .map_err(|e| Error::InvalidInput(format!("bad element hex in certificate: {}", e)))?;
    GroupElement::decode(shape, &bytes)
}

/// Re-verify a certificate from its own data. Checks, in order: decodability
/// of all elements; that the subgroup generators close to exactly as many
/// elements as there are members; that the member list is exactly the coset
/// witness * K; and that every member's claimed order o is p-divisible, with
/// member^o = 1 and member^(o/p) != 1.
pub fn replay(cert: &ObstructionCertificate) -> Result<()> {
    if cert.mode != MODE_EXPLICIT && cert.mode != MODE_QUOTIENT_LIFTED {
        return Err(Error::InvalidInput(format!(
            "unknown certificate mode {:?}",
            cert.mode
        )));
    }
    if (cert.mode == MODE_QUOTIENT_LIFTED) != cert.implicit_group.is_some() {
        return Err(Error::InvalidInput(
            "implicit group description must be present exactly in quotient-lifted mode".into(),
        ));
    }
    if cert.p < 2 || cert.members.is_empty() {
        return Err(Error::InvalidInput("degenerate certificate".into()));
    }
    for g in &cert.group_generators {
        decode_hex_element(&cert.shape, g)?;
    }
    let witness = decode_hex_element(&cert.shape, &cert.witness)?;
    let sub_gens: Vec<GroupElement> = cert
        .subgroup_generators
        .iter()
        .map(|s| decode_hex_element(&cert.shape, s))
        .collect::<Result<_>>()?;

    // Close the subgroup by plain element arithmetic, bounded by the member
    // count (a coset is in bijection with the subgroup).
    let identity = witness.identity_like();
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    seen.insert(identity.canonical_bytes());
    let mut frontier = vec![identity];
    let mut closure = frontier.clone();
    while let Some(x) = frontier.pop() {
        for g in &sub_gens {
            let y = x.mul(g)?;
            if seen.insert(y.canonical_bytes()) {
                if closure.len() == cert.members.len() {
                    return Err(Error::InvalidInput(
                        "subgroup closure exceeds the member list".into(),
                    ));
                }
                closure.push(y.clone());
                frontier.push(y);
            }
        }
    }
    if closure.len() != cert.members.len() {
        return Err(Error::InvalidInput(format!(
            "subgroup closure has {} elements but {} members are listed",
            closure.len(),
            cert.members.len()
        )));
    }

    let mut coset: HashSet<Vec<u8>> = HashSet::new();
    for k in &closure {
        coset.insert(witness.mul(k)?.canonical_bytes());
    }
    let mut listed: HashSet<Vec<u8>> = HashSet::new();
    for m in &cert.members {
        let el = decode_hex_element(&cert.shape, &m.element)?;
        if !listed.insert(el.canonical_bytes()) {
            return Err(Error::InvalidInput("duplicate member in certificate".into()));
        }
        if m.order % cert.p != 0 {
            return Err(Error::InvalidInput(format!(
                "member order {} is not divisible by {}",
                m.order, cert.p
            )));
        }
        if !el.pow(m.order)?.is_identity() {
            return Err(Error::InvalidInput(
                "member does not vanish at its claimed order".into(),
            ));
        }
        if el.pow(m.order / cert.p)?.is_identity() {
            return Err(Error::InvalidInput(
                "member order divided by p already annihilates it".into(),
            ));
        }
    }
    if listed != coset {
        return Err(Error::InvalidInput(
            "member list does not match witness * subgroup".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adequacy::first_obstructed_coset;
    use crate::field::Field;
    use crate::linalg::Matrix;

    fn s3_matrix_group() -> Arc<FiniteGroup> {
        let f2 = Field::new(2, 1).unwrap();
        let gens = vec![
            GroupElement::matrix(Matrix::from_i64(&f2, &[&[0, 1], &[1, 0]]).unwrap()).unwrap(),
            GroupElement::matrix(Matrix::from_i64(&f2, &[&[0, 1], &[1, 1]]).unwrap()).unwrap(),
        ];
        Arc::new(FiniteGroup::enumerate(gens, 100).unwrap())
    }

    #[test]
    fn certificate_roundtrip_and_replay() {
        let g = s3_matrix_group();
        let rot: Vec<u32> = (0..6).filter(|&i| g.element_order(i) % 2 == 1).collect();
        let obs = first_obstructed_coset(&g, &rot, 2, 1).unwrap().unwrap();
        let gens = g.small_generating_set(&rot);
        let cert = certify_coset(MODE_EXPLICIT, 2, &g, &gens, &obs, None).unwrap();
        assert_eq!(cert.members.len(), 3);
        replay(&cert).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        let back: ObstructionCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
        replay(&back).unwrap();
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let g = s3_matrix_group();
        let rot: Vec<u32> = (0..6).filter(|&i| g.element_order(i) % 2 == 1).collect();
        let obs = first_obstructed_coset(&g, &rot, 2, 1).unwrap().unwrap();
        let gens = g.small_generating_set(&rot);
        let cert = certify_coset(MODE_EXPLICIT, 2, &g, &gens, &obs, None).unwrap();

        // Wrong claimed order.
        let mut bad = cert.clone();
        bad.members[0].order = 4;
        assert!(replay(&bad).is_err());

        // Claimed order not divisible by p.
        let mut bad = cert.clone();
        bad.members[0].order = 3;
        assert!(replay(&bad).is_err());

        // Member swapped for an element outside the coset (the identity).
        let mut bad = cert.clone();
        bad.members[0].element = hex_of(&g.element(0));
        bad.members[0].order = 2; // lie about the order too
        assert!(replay(&bad).is_err());

        // Dropped member.
        let mut bad = cert.clone();
        bad.members.pop();
        assert!(replay(&bad).is_err());

        // Witness moved to an unobstructed coset.
        let mut bad = cert.clone();
        bad.witness = hex_of(&g.element(0));
        assert!(replay(&bad).is_err());

        // Mode/implicit mismatch.
        let mut bad = cert.clone();
        bad.mode = MODE_QUOTIENT_LIFTED.into();
        assert!(replay(&bad).is_err());

        // Unknown mode.
        let mut bad = cert;
        bad.mode = "verbal".into();
        assert!(replay(&bad).is_err());
    }

    #[test]
    fn trivial_subgroup_certificates_replay() {
        // Singleton cosets: subgroup generator list is empty, the closure is
        // just the identity, and each member must equal the witness.
        let g = s3_matrix_group();
        let trivial = vec![0u32];
        let obs = first_obstructed_coset(&g, &trivial, 3, 1).unwrap().unwrap();
        assert_eq!(obs.members.len(), 1);
        assert_eq!(g.element_order(obs.rep) % 3, 0);
        let cert = certify_coset(MODE_EXPLICIT, 3, &g, &[], &obs, None).unwrap();
        replay(&cert).unwrap();
    }
}
