//! A fixed menu of small groups and modules, rebuilt deterministically from
//! generators on every call. The lists feed the spanning baselines for
//! groups of order coprime to p, the p-solvable complement checks, the
//! cohomology census, the induction pairs, the tensor-step instances, and
//! the dimension-bound sweep.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groups::{FiniteGroup, GroupElement};
use crate::linalg::Matrix;
use crate::modrep::{induce, Representation};
use std::sync::Arc;

const CATALOG_CAP: u64 = 100_000;

/// One named module in a fixed characteristic.
pub struct CatalogCase {
    pub name: &'static str,
    pub p: u64,
    pub rep: Representation,
}

/// A group together with the characteristics its cohomology is probed in.
pub struct CensusEntry {
    pub name: &'static str,
    pub group: Arc<FiniteGroup>,
    pub primes: Vec<u64>,
}

/// A group, a subgroup, and a characteristic for induction cross-checks.
pub struct InductionPair {
    pub name: &'static str,
    pub p: u64,
    pub big: Arc<FiniteGroup>,
    pub sub: Vec<u32>,
}

/// A group with a normal subgroup of order coprime to p acting irreducibly
/// on `u` and trivially on `w`.
pub struct TensorCase {
    pub name: &'static str,
    pub p: u64,
    pub normal: Vec<u32>,
    pub u: Representation,
    pub w: Representation,
}

// ---------------------------------------------------------------------------
// Group builders.

pub fn cyclic(n: u64) -> Result<Arc<FiniteGroup>> {
    let map: Vec<u32> = (0..n as u32).map(|i| ((i as u64 + 1) % n) as u32).collect();
    Ok(Arc::new(FiniteGroup::enumerate(
        vec![GroupElement::permutation(map)?],
        CATALOG_CAP,
    )?))
}

/// Dihedral group of order 2n acting on the vertices of an n-gon.
pub fn dihedral(n: u64) -> Result<Arc<FiniteGroup>> {
    let rotation: Vec<u32> = (0..n as u32).map(|i| ((i as u64 + 1) % n) as u32).collect();
    let reflection: Vec<u32> = (0..n as u32).map(|i| ((n - i as u64) % n) as u32).collect();
    Ok(Arc::new(FiniteGroup::enumerate(
        vec![
            GroupElement::permutation(rotation)?,
            GroupElement::permutation(reflection)?,
        ],
        CATALOG_CAP,
    )?))
}

pub fn klein_four() -> Result<Arc<FiniteGroup>> {
    perm_group(&[vec![1, 0, 3, 2], vec![2, 3, 0, 1]])
}

pub fn symmetric3() -> Result<Arc<FiniteGroup>> {
    perm_group(&[vec![1, 0, 2], vec![1, 2, 0]])
}

pub fn symmetric4() -> Result<Arc<FiniteGroup>> {
    perm_group(&[vec![1, 0, 2, 3], vec![1, 2, 3, 0]])
}

pub fn alternating4() -> Result<Arc<FiniteGroup>> {
    perm_group(&[vec![1, 0, 3, 2], vec![1, 2, 0, 3]])
}

pub fn elementary9() -> Result<Arc<FiniteGroup>> {
    perm_group(&[vec![1, 2, 0, 3, 4, 5], vec![0, 1, 2, 4, 5, 3]])
}

/// The quaternion group as 2x2 matrices over GF(5), where -1 is a square.
pub fn quaternion8() -> Result<Arc<FiniteGroup>> {
    let f5 = Field::new(5, 1)?;
    matrix_group(&[
        Matrix::from_i64(&f5, &[&[2, 0], &[0, -2]])?,
        Matrix::from_i64(&f5, &[&[0, 1], &[-1, 0]])?,
    ])
}

pub fn sl2_3() -> Result<Arc<FiniteGroup>> {
    let f3 = Field::new(3, 1)?;
    matrix_group(&[
        Matrix::from_i64(&f3, &[&[1, 1], &[0, 1]])?,
        Matrix::from_i64(&f3, &[&[0, -1], &[1, 0]])?,
    ])
}

pub fn gl2_3() -> Result<Arc<FiniteGroup>> {
    let f3 = Field::new(3, 1)?;
    matrix_group(&[
        Matrix::from_i64(&f3, &[&[1, 1], &[0, 1]])?,
        Matrix::from_i64(&f3, &[&[0, -1], &[1, 0]])?,
        Matrix::from_i64(&f3, &[&[1, 0], &[0, -1]])?,
    ])
}

/// The Frobenius group of order 21 on 7 points: a 7-cycle normalized by
/// multiplication by 2 mod 7.
pub fn frobenius21() -> Result<Arc<FiniteGroup>> {
    perm_group(&[
        (0..7u32).map(|i| (i + 1) % 7).collect(),
        (0..7u32).map(|i| (2 * i) % 7).collect(),
    ])
}

fn perm_group(maps: &[Vec<u32>]) -> Result<Arc<FiniteGroup>> {
    let gens = maps
        .iter()
        .map(|m| GroupElement::permutation(m.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Arc::new(FiniteGroup::enumerate(gens, CATALOG_CAP)?))
}

fn matrix_group(mats: &[Matrix]) -> Result<Arc<FiniteGroup>> {
    let gens = mats
        .iter()
        .map(|m| GroupElement::matrix(m.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Arc::new(FiniteGroup::enumerate(gens, CATALOG_CAP)?))
}

// ---------------------------------------------------------------------------
// Module builders.

/// One-dimensional module from packed generator image values.
fn character(group: &Arc<FiniteGroup>, field: &Field, values: &[i64]) -> Result<Representation> {
    let images = values
        .iter()
        .map(|&v| Matrix::from_i64(field, &[&[v]]))
        .collect::<Result<Vec<_>>>()?;
    Representation::from_generator_images(group.clone(), field.clone(), images)
}

fn root_character(group: &Arc<FiniteGroup>, field: &Field, order: u64) -> Result<Representation> {
    let zeta = field.element_of_order(order)?;
    let images = vec![Matrix::from_scalars(field, &[vec![zeta]])?];
    Representation::from_generator_images(group.clone(), field.clone(), images)
}

/// The action on the sum-zero subspace of the permutation module, spanned by
/// the difference vectors e_i - e_{i+1}.
fn standard_module(group: &Arc<FiniteGroup>, field: &Field, points: usize) -> Result<Representation> {
    let perm = Representation::from_permutation_action(group, field)?;
    let mut cols = Matrix::zeros(field, points, points - 1);
    for j in 0..points - 1 {
        cols.set_value(j, j, 1);
        cols.set_value(j + 1, j, field.spec().val_neg(1));
    }
    perm.subrepresentation_on_columns(&cols)
}

/// Rotation-reflection matrices for the dihedral group of order 2n over a
/// field containing an n-th root of unity: diag(z, 1/z) and the coordinate
/// swap. Returns the matrix group with its natural module.
fn dihedral_rotation_module(n: u64, field: &Field) -> Result<(Arc<FiniteGroup>, Representation)> {
    let z = field.element_of_order(n)?;
    let rot = Matrix::from_scalars(
        field,
        &[
            vec![z, field.zero()],
            vec![field.zero(), field.inv(z)?],
        ],
    )?;
    let flip = Matrix::from_i64(field, &[&[0, 1], &[1, 0]])?;
    let group = matrix_group(&[rot, flip])?;
    let rep = Representation::natural(&group, field)?;
    Ok((group, rep))
}

/// Restriction of a module to the subgroup with the given element indices,
/// rebuilt as a standalone group.
pub fn restrict_to_subgroup(rep: &Representation, indices: &[u32]) -> Result<Representation> {
    let group = rep.group();
    let mut gen_indices = group.small_generating_set(indices);
    if gen_indices.is_empty() {
        gen_indices.push(0);
    }
    let gens: Vec<GroupElement> = gen_indices
        .iter()
        .map(|&i| group.element(i).clone())
        .collect();
    let sub = Arc::new(FiniteGroup::enumerate(gens, group.order())?);
    if sub.order() != indices.len() as u64 {
        return Err(Error::NotSubgroup);
    }
    let images = gen_indices.iter().map(|&i| rep.image(i)).collect();
    Representation::from_generator_images(sub, rep.field().clone(), images)
}

/// 2^(2^k) + 1 primes; the exceptional characteristics in the dimension
/// bound for p-solvable groups.
pub fn is_fermat_prime(p: u64) -> bool {
    p >= 3 && (p - 1).is_power_of_two() && {
        let mut d = 2;
        while d * d <= p {
            if p % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }
}

// ---------------------------------------------------------------------------
// The lists.

/// Modules of groups whose order is coprime to p; every one is absolutely
/// irreducible, so its images span the full endomorphism algebra and all of
/// them are p-regular.
pub fn coprime_order_cases() -> Result<Vec<CatalogCase>> {
    let f3 = Field::new(3, 1)?;
    let f4 = Field::new(2, 2)?;
    let f5 = Field::new(5, 1)?;
    let f7 = Field::new(7, 1)?;
    let f8 = Field::new(2, 3)?;
    let f11 = Field::new(11, 1)?;
    let f29 = Field::new(29, 1)?;

    let mut out = Vec::new();
    let mut push = |name, p, rep| out.push(CatalogCase { name, p, rep });

    push("C2 sign character over GF(3)", 3, character(&cyclic(2)?, &f3, &[-1])?);
    push("C3 cube-root character over GF(7)", 7, root_character(&cyclic(3)?, &f7, 3)?);
    push("C4 fourth-root character over GF(5)", 5, root_character(&cyclic(4)?, &f5, 4)?);
    push("C5 fifth-root character over GF(11)", 11, root_character(&cyclic(5)?, &f11, 5)?);
    push("C6 sixth-root character over GF(7)", 7, root_character(&cyclic(6)?, &f7, 6)?);
    push("C7 seventh-root character over GF(8)", 2, root_character(&cyclic(7)?, &f8, 7)?);
    push("C3 cube-root character over GF(4)", 2, root_character(&cyclic(3)?, &f4, 3)?);

    let s3 = symmetric3()?;
    push("S3 standard module over GF(5)", 5, standard_module(&s3, &f5, 3)?);
    push("S3 standard module over GF(7)", 7, standard_module(&s3, &f7, 3)?);

    let d4 = dihedral(4)?;
    {
        // The square's perm module splits off a faithful plane spanned by
        // the two diagonals' difference vectors.
        let perm = Representation::from_permutation_action(&d4, &f3)?;
        let cols = Matrix::from_i64(&f3, &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]])?;
        push(
            "D4 rotation module over GF(3)",
            3,
            perm.subrepresentation_on_columns(&cols)?,
        );
    }
    push("D4 sign character over GF(3)", 3, character(&d4, &f3, &[-1, -1])?);

    let (_, d5_rep) = dihedral_rotation_module(5, &f11)?;
    push("D5 rotation module over GF(11)", 11, d5_rep);
    let (_, d7_rep) = dihedral_rotation_module(7, &f29)?;
    push("D7 rotation module over GF(29)", 29, d7_rep);

    let q8 = quaternion8()?;
    push("Q8 spin module over GF(5)", 5, Representation::natural(&q8, &f5)?);
    push("Q8 sign character over GF(3)", 3, character(&q8, &f3, &[-1, 1])?);

    let a4 = alternating4()?;
    push("A4 standard module over GF(7)", 7, standard_module(&a4, &f7, 4)?);
    push("A4 cube-root character over GF(7)", 7, {
        let zeta = f7.element_of_order(3)?;
        let images = vec![
            Matrix::identity(&f7, 1),
            Matrix::from_scalars(&f7, &[vec![zeta]])?,
        ];
        Representation::from_generator_images(a4.clone(), f7.clone(), images)?
    });

    let v4 = klein_four()?;
    push("V4 cross character over GF(3)", 3, character(&v4, &f3, &[-1, 1])?);

    let s4 = symmetric4()?;
    push("S4 standard module over GF(5)", 5, standard_module(&s4, &f5, 4)?);
    push(
        "S4 partition-swap module over GF(5)",
        5,
        Representation::from_generator_images(
            s4.clone(),
            f5.clone(),
            vec![
                Matrix::from_i64(&f5, &[&[1, 0], &[1, -1]])?,
                Matrix::from_i64(&f5, &[&[0, -1], &[-1, 0]])?,
            ],
        )?,
    );

    {
        let f21 = frobenius21()?;
        let seven_cycle = f21.generators()[0].clone();
        let c7 = Arc::new(FiniteGroup::enumerate(vec![seven_cycle], CATALOG_CAP)?);
        let w = root_character(&c7, &f8, 7)?;
        push(
            "Frobenius-21 induced module over GF(8)",
            2,
            induce(&f21, &c7, &w)?,
        );
    }

    Ok(out)
}

/// p-solvable groups with p dividing the group order but not the module
/// dimension; each has a p-complement whose restriction stays absolutely
/// irreducible.
pub fn p_solvable_cases() -> Result<Vec<CatalogCase>> {
    let f3 = Field::new(3, 1)?;
    let f5 = Field::new(5, 1)?;
    let f7 = Field::new(7, 1)?;

    let mut out = Vec::new();
    let mut push = |name, p, rep| out.push(CatalogCase { name, p, rep });

    let sl = sl2_3()?;
    push("SL2(3) natural module at 3", 3, Representation::natural(&sl, &f3)?);
    push("S3 sign character at 3", 3, character(&symmetric3()?, &f3, &[-1, 1])?);
    push("S4 sign character at 3", 3, character(&symmetric4()?, &f3, &[-1, -1])?);
    push("D5 sign character at 5", 5, character(&dihedral(5)?, &f5, &[1, -1])?);
    push("Frobenius-21 cube-root character at 7", 7, {
        let f21 = frobenius21()?;
        let zeta = f7.element_of_order(3)?;
        let images = vec![
            Matrix::identity(&f7, 1),
            Matrix::from_scalars(&f7, &[vec![zeta]])?,
        ];
        Representation::from_generator_images(f21, f7.clone(), images)?
    });

    Ok(out)
}

/// Faithful instances that exercise the non-vacuous branch of the dimension
/// bound: p divides the group order and the dimension is p - 1.
pub fn boundary_cases() -> Result<Vec<CatalogCase>> {
    let f3 = Field::new(3, 1)?;
    Ok(vec![CatalogCase {
        name: "GL2(3) natural module at 3",
        p: 3,
        rep: Representation::natural(&gl2_3()?, &f3)?,
    }])
}

/// Everything the dimension-bound sweep walks.
pub fn all_cases() -> Result<Vec<CatalogCase>> {
    let mut out = coprime_order_cases()?;
    out.extend(p_solvable_cases()?);
    out.extend(boundary_cases()?);
    Ok(out)
}

/// Groups for the cohomology census, each probed in the given
/// characteristics.
pub fn census_groups() -> Result<Vec<CensusEntry>> {
    let entry = |name, group, primes: &[u64]| CensusEntry {
        name,
        group,
        primes: primes.to_vec(),
    };
    Ok(vec![
        entry("C2", cyclic(2)?, &[2, 3]),
        entry("C3", cyclic(3)?, &[2, 3]),
        entry("C4", cyclic(4)?, &[2, 5]),
        entry("C5", cyclic(5)?, &[3, 5]),
        entry("C6", cyclic(6)?, &[2, 3, 5]),
        entry("C7", cyclic(7)?, &[2, 7]),
        entry("V4", klein_four()?, &[2, 3]),
        entry("C3xC3", elementary9()?, &[2, 3]),
        entry("S3", symmetric3()?, &[2, 3, 5]),
        entry("D4", dihedral(4)?, &[2, 3]),
        entry("D5", dihedral(5)?, &[2, 5]),
        entry("D7", dihedral(7)?, &[2, 7]),
        entry("A4", alternating4()?, &[2, 3]),
        entry("S4", symmetric4()?, &[2, 3]),
        entry("Q8", quaternion8()?, &[2, 3]),
        entry("SL2(3)", sl2_3()?, &[2, 3]),
        entry("Frobenius-21", frobenius21()?, &[3, 7]),
    ])
}

/// Group/subgroup pairs for the induction identity
/// h1(G, induced trivial module) = h1(K, trivial module).
pub fn induction_pairs() -> Result<Vec<InductionPair>> {
    let mut out = Vec::new();

    let s3 = symmetric3()?;
    let rot = s3.subgroup_indices(&[s3
        .index_of(&GroupElement::permutation(vec![1, 2, 0])?)
        .ok_or(Error::NotSubgroup)?]);
    out.push(InductionPair {
        name: "S3 over its rotation subgroup at 3",
        p: 3,
        big: s3,
        sub: rot,
    });

    let s4 = symmetric4()?;
    let stab = s4.subgroup_from_elements(&[
        GroupElement::permutation(vec![1, 0, 2, 3])?,
        GroupElement::permutation(vec![1, 2, 0, 3])?,
    ])?;
    out.push(InductionPair {
        name: "S4 over a point stabilizer at 2",
        p: 2,
        big: s4,
        sub: stab,
    });

    let a4 = alternating4()?;
    let v4_in_a4 = a4.subgroup_from_elements(&[
        GroupElement::permutation(vec![1, 0, 3, 2])?,
        GroupElement::permutation(vec![2, 3, 0, 1])?,
    ])?;
    out.push(InductionPair {
        name: "A4 over its Klein subgroup at 2",
        p: 2,
        big: a4.clone(),
        sub: v4_in_a4,
    });

    let c3_in_a4 = a4.subgroup_from_elements(&[GroupElement::permutation(vec![1, 2, 0, 3])?])?;
    out.push(InductionPair {
        name: "A4 over a rotation subgroup at 3",
        p: 3,
        big: a4,
        sub: c3_in_a4,
    });

    let sl = sl2_3()?;
    let q8_in_sl = sl.o_p_prime(3);
    out.push(InductionPair {
        name: "SL2(3) over its quaternion subgroup at 3",
        p: 3,
        big: sl,
        sub: q8_in_sl,
    });

    Ok(out)
}

/// Instances for the tensor step: a normal subgroup of order coprime to p,
/// irreducible on `u` and trivial on `w`.
pub fn tensor_cases() -> Result<Vec<TensorCase>> {
    let f3 = Field::new(3, 1)?;
    let mut out = Vec::new();

    let sl = sl2_3()?;
    out.push(TensorCase {
        name: "SL2(3): natural times trivial at 3",
        p: 3,
        normal: sl.o_p_prime(3),
        u: Representation::natural(&sl, &f3)?,
        w: Representation::trivial(sl.clone(), &f3),
    });

    let gl = gl2_3()?;
    out.push(TensorCase {
        name: "GL2(3): natural times determinant at 3",
        p: 3,
        normal: gl.o_p_prime(3),
        u: Representation::natural(&gl, &f3)?,
        w: character(&gl, &f3, &[1, 1, -1])?,
    });

    let gl2 = gl2_3()?;
    out.push(TensorCase {
        name: "GL2(3): natural times trivial at 3",
        p: 3,
        normal: gl2.o_p_prime(3),
        u: Representation::natural(&gl2, &f3)?,
        w: Representation::trivial(gl2.clone(), &f3),
    });

    Ok(out)
}
