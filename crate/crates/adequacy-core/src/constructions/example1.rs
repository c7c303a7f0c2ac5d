//! Induced modules over a semidirect product A . H that are absolutely
//! irreducible but not weakly adequate.
//!
//! A is elementary abelian of order r^a, H acts faithfully and irreducibly
//! on it with order divisible by p, and H itself is generated by p-regular
//! elements. A character of A in a regular H-orbit induces up to a module of
//! dimension |H| over a splitting field of characteristic p; the cosets of A
//! sitting over order-divisible-by-p elements of H have no p-regular members
//! at all, which traps the p-regular span in a proper subspace.

use crate::adequacy::{
    algebra_span_rank, is_absolutely_irreducible, obstructed_cosets, CosetObstruction,
    ElementFilter,
};
use crate::error::{Error, Result};
use crate::field::{splitting_degree, Field};
use crate::groups::{FiniteGroup, GroupElement};
use crate::linalg::{Matrix, SpanAccumulator};
use crate::modrep::{induce, Representation};
use std::collections::BTreeMap;
use std::sync::Arc;

use super::certificate::{certify_coset, ObstructionCertificate, MODE_EXPLICIT};

/// Everything built for one instance.
pub struct Example1 {
    pub group: Arc<FiniteGroup>,
    pub module: Representation,
    /// Indices of the normal elementary abelian base A inside the group.
    pub base_indices: Vec<u32>,
    /// Exponent vector of the inducing character.
    pub character: Vec<u64>,
    /// All cosets of A with no p-regular member.
    pub obstructions: Vec<CosetObstruction>,
    pub certificate: ObstructionCertificate,
}

fn h_group(r: u64, a: u32, h_gens: &[Matrix]) -> Result<(Field, Arc<FiniteGroup>)> {
    let fr = Field::new(r, 1)?;
    if h_gens.is_empty() {
        return Err(Error::InvalidInput("H needs at least one generator".into()));
    }
    for m in h_gens {
        if m.field() != &fr || m.rows() != a as usize || !m.is_square() {
            return Err(Error::InvalidInput(format!(
                "H generators must be {a} x {a} over the base prime field"
            )));
        }
    }
    let els = h_gens
        .iter()
        .map(|m| GroupElement::matrix(m.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok((fr, Arc::new(FiniteGroup::enumerate(els, 100_000)?)))
}

/// Check that no proper nonzero subspace is H-invariant by spinning every
/// projective point.
fn acts_irreducibly(h: &Arc<FiniteGroup>, fr: &Field, a: u32) -> Result<bool> {
    let nat = Representation::natural(h, fr)?;
    let dim = a as usize;
    let mut point = vec![0u32; dim];
    loop {
        // Next projective point representative: first nonzero coordinate 1.
        if !next_projective_point(&mut point, fr.p() as u32) {
            return Ok(true);
        }
        let mut acc = SpanAccumulator::new(fr, dim);
        for i in 0..h.order() as u32 {
            let moved = nat.image(i).mul_vec_values(&point);
            acc.insert_values(&moved);
            if acc.is_full() {
                break;
            }
        }
        if !acc.is_full() {
            return Ok(false);
        }
    }
}

fn next_projective_point(point: &mut [u32], r: u32) -> bool {
    // Iterate vectors whose first nonzero entry is 1, in lexicographic order.
    loop {
        let mut i = point.len();
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            point[i] += 1;
            if point[i] < r {
                break;
            }
            point[i] = 0;
        }
        let first_nonzero = point.iter().find(|&&x| x != 0);
        if first_nonzero == Some(&1) {
            return true;
        }
    }
}

/// Canonically least nontrivial character (as an exponent vector) whose
/// H-orbit under the transpose-inverse action is regular. On failure, the
/// full orbit-size census is reported in the error.
pub fn find_regular_orbit_character(r: u64, a: u32, h_gens: &[Matrix]) -> Result<Vec<u64>> {
    let (fr, h) = h_group(r, a, h_gens)?;
    regular_orbit_character(&fr, &h, a)
}

fn regular_orbit_character(fr: &Field, h: &Arc<FiniteGroup>, a: u32) -> Result<Vec<u64>> {
    let nat = Representation::natural(h, fr)?;
    let dim = a as usize;
    let order = h.order() as u32;
    // h^T w for every h, on packed vectors.
    let transposes: Vec<Matrix> = (0..order).map(|i| nat.image(i).transpose()).collect();
    let mut census: BTreeMap<u64, u64> = BTreeMap::new();
    let mut seen = vec![false; (fr.p() as usize).pow(a)];
    let mut w = vec![0u32; dim];
    let pack = |v: &[u32]| -> usize {
        v.iter().fold(0usize, |acc, &d| acc * fr.p() as usize + d as usize)
    };
    loop {
        if !next_vector(&mut w, fr.p() as u32) {
            break;
        }
        if seen[pack(&w)] {
            continue;
        }
        // Stabilizer is trivial exactly when h^T w = w only for h = 1.
        let mut orbit: Vec<usize> = Vec::new();
        let mut stab = 0u64;
        for tm in &transposes {
            let moved = tm.mul_vec_values(&w);
            if moved == w {
                stab += 1;
            }
            let code = pack(&moved);
            if !orbit.contains(&code) {
                orbit.push(code);
            }
        }
        if stab == 1 {
            return Ok(w.iter().map(|&d| d as u64).collect());
        }
        for code in orbit {
            seen[code] = true;
        }
        *census.entry(h.order() / stab).or_insert(0) += 1;
    }
    Err(Error::SearchExhausted(format!(
        "no regular character orbit; orbit sizes (size: count) {:?}",
        census
    )))
}

fn next_vector(v: &mut [u32], r: u32) -> bool {
    let mut i = v.len();
    loop {
        if i == 0 {
            return false;
        }
        i -= 1;
        v[i] += 1;
        if v[i] < r {
            return true;
        }
        v[i] = 0;
    }
}

/// Build the full instance: the group A . H, the induced module, the coset
/// obstructions, and a replayable certificate for the least one.
pub fn build_example1(
    r: u64,
    a: u32,
    h_gens: &[Matrix],
    p: u64,
    cap: u64,
    threads: usize,
) -> Result<Example1> {
    if r == p {
        return Err(Error::InvalidInput(
            "the base characteristic r must differ from p".into(),
        ));
    }
    if a == 0 || a > 8 {
        return Err(Error::InvalidInput("need 1 <= a <= 8".into()));
    }
    Field::new(p, 1)?; // validates p prime
    let (fr, h) = h_group(r, a, h_gens)?;
    if h.order() % p != 0 {
        return Err(Error::Precondition(
            "p must divide |H|, otherwise no coset can be obstructed".into(),
        ));
    }
    if !h.is_generated_by_p_regular(p, threads) {
        return Err(Error::Precondition(
            "H is not generated by its p-regular elements".into(),
        ));
    }
    if !acts_irreducibly(&h, &fr, a)? {
        return Err(Error::Precondition(
            "H does not act irreducibly on the base".into(),
        ));
    }
    let character = regular_orbit_character(&fr, &h, a)?;

    // G = A . H with A elementary abelian of rank a.
    let identity_h = GroupElement::matrix(Matrix::identity(&fr, a as usize))?;
    let mut gens: Vec<GroupElement> = Vec::new();
    for i in 0..a as usize {
        let mut v = vec![0u32; a as usize];
        v[i] = 1;
        gens.push(GroupElement::semidirect(r as u32, v, identity_h.clone())?);
    }
    let base_gen_count = gens.len();
    for m in h_gens {
        gens.push(GroupElement::semidirect(
            r as u32,
            vec![0; a as usize],
            GroupElement::matrix(m.clone())?,
        )?);
    }
    let group = Arc::new(FiniteGroup::enumerate(gens.clone(), cap)?);
    let expected = r.pow(a) * h.order();
    if group.order() != expected {
        return Err(Error::Precondition(format!(
            "expected |G| = {}, enumerated {}",
            expected,
            group.order()
        )));
    }
    let base_gen_indices: Vec<u32> = (0..base_gen_count)
        .map(|s| group.generator_index(s))
        .collect();
    let base_indices = group.subgroup_indices(&base_gen_indices);

    // The inducing character lives on A as a standalone group.
    let base = Arc::new(FiniteGroup::enumerate(
        gens[..base_gen_count].to_vec(),
        cap,
    )?);
    let k = Field::new(p, splitting_degree(p, r)?)?;
    let zeta = k.element_of_order(r)?;
    let images = character
        .iter()
        .map(|&wi| {
            let val = k.pow(zeta, wi)?;
            Matrix::from_scalars(&k, &[vec![val]])
        })
        .collect::<Result<Vec<_>>>()?;
    let lambda = Representation::from_generator_images(base.clone(), k.clone(), images)?;
    let module = induce(&group, &base, &lambda)?;
    if module.dim() as u64 != h.order() {
        return Err(Error::Precondition(
            "induced dimension does not equal |H|".into(),
        ));
    }
    if !is_absolutely_irreducible(&module, threads)? {
        return Err(Error::Precondition(
            "induced module is not absolutely irreducible".into(),
        ));
    }
    let d = module.dim();
    if algebra_span_rank(&module, ElementFilter::PRegular(p), threads)? == d * d {
        return Err(Error::Precondition(
            "p-regular span is unexpectedly full".into(),
        ));
    }

    let obstructions = obstructed_cosets(&group, &base_indices, p, threads)?;
    let first = obstructions
        .first()
        .ok_or_else(|| Error::SearchExhausted("no obstructed coset of the base".into()))?;
    let certificate = certify_coset(MODE_EXPLICIT, p, &group, &base_gen_indices, first, None)?;
    Ok(Example1 {
        group,
        module,
        base_indices,
        character,
        obstructions,
        certificate,
    })
}

/// The standard two-dimensional faithful irreducible matrix generators of S3
/// over F_r (a transposition and a rotation), usable as H for r >= 5.
pub fn s3_matrix_gens(r: u64) -> Result<Vec<Matrix>> {
    let fr = Field::new(r, 1)?;
    Ok(vec![
        Matrix::from_i64(&fr, &[&[0, 1], &[1, 0]])?,
        Matrix::from_i64(&fr, &[&[0, -1], &[1, -1]])?,
    ])
}
