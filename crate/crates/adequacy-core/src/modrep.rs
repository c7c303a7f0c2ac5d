//! Matrix representations of finite groups.
//!
//! A representation stores one image matrix per group generator and either
//! materializes the image of every element (small groups) or reconstructs
//! images on demand by walking the enumeration tree (large groups). Building
//! from generator images checks the multiplication table: every product edge
//! of the enumeration must be respected by the images, which is exactly the
//! statement that the assignment extends to a homomorphism. For groups too
//! large to materialize, only a prefix of the table is checked and the
//! remaining edges are trusted; all constructions in this crate that rely on
//! exactness use the fully checked path.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::groups::{FiniteGroup, GroupElement};
use crate::linalg::Matrix;

/// Groups up to this order get fully materialized (and fully validated)
/// images.
pub const MATERIALIZE_LIMIT: u64 = 10_000;

/// Cap on total stored matrix entries when materializing.
const MATERIALIZE_ENTRY_BUDGET: u64 = 50_000_000;

/// How many leading elements of an oversized group get validated.
const LAZY_VALIDATION_PREFIX: usize = 10_000;

enum Images {
    Materialized(Vec<Matrix>),
    Lazy { gen_images: Vec<Matrix> },
}

/// A finite-dimensional representation over a finite field.
pub struct Representation {
    group: Arc<FiniteGroup>,
    field: Field,
    dim: usize,
    images: Images,
}

impl std::fmt::Debug for Representation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Representation {{ group_order: {}, dim: {}, field: {}, materialized: {} }}",
            self.group.order(),
            self.dim,
            self.field,
            self.is_materialized()
        )
    }
}

impl Representation {
    /// Build a representation from one image per generator, validating the
    /// homomorphism property against the group's multiplication table.
    pub fn from_generator_images(
        group: Arc<FiniteGroup>,
        field: Field,
        gen_images: Vec<Matrix>,
    ) -> Result<Representation> {
        if gen_images.len() != group.generator_count() {
            return Err(Error::Dimension(format!(
                "expected {} generator images, got {}",
                group.generator_count(),
                gen_images.len()
            )));
        }
        let dim = gen_images
            .first()
            .map(|m| m.rows())
            .ok_or_else(|| Error::Dimension("a representation needs at least one image".into()))?;
        if dim == 0 {
            return Err(Error::Dimension("representation dimension must be positive".into()));
        }
        for m in &gen_images {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::Dimension("generator images must be square of equal size".into()));
            }
            if *m.field() != field {
                return Err(Error::FieldMismatch);
            }
            // Images of group elements must be invertible.
            m.inverse()?;
        }

        let order = group.order();
        let materialize =
            order <= MATERIALIZE_LIMIT && order * (dim as u64) * (dim as u64) <= MATERIALIZE_ENTRY_BUDGET;
        if materialize {
            let images = build_prefix_images(&group, &field, dim, &gen_images, order as usize)?;
            validate_prefix_edges(&group, &gen_images, &images)?;
            Ok(Representation {
                group,
                field,
                dim,
                images: Images::Materialized(images),
            })
        } else {
            let prefix_len = LAZY_VALIDATION_PREFIX.min(order as usize);
            let prefix = build_prefix_images(&group, &field, dim, &gen_images, prefix_len)?;
            validate_prefix_edges(&group, &gen_images, &prefix)?;
            Ok(Representation {
                group,
                field,
                dim,
                images: Images::Lazy { gen_images },
            })
        }
    }

    /// The one-dimensional representation sending everything to 1.
    pub fn trivial(group: Arc<FiniteGroup>, field: &Field) -> Representation {
        let gen_images = vec![Matrix::identity(field, 1); group.generator_count()];
        Representation::from_generator_images(group, field.clone(), gen_images)
            .expect("identity images always extend")
    }

    /// For a group of matrix or monomial elements, the representation given by
    /// the elements themselves.
    pub fn natural(group: &Arc<FiniteGroup>, field: &Field) -> Result<Representation> {
        let gen_images: Vec<Matrix> = group
            .generators()
            .iter()
            .map(|g| element_as_matrix(g, field))
            .collect::<Result<_>>()?;
        Representation::from_generator_images(group.clone(), field.clone(), gen_images)
    }

    /// For a group of permutation elements, the permutation matrices over the
    /// given field.
    pub fn from_permutation_action(group: &Arc<FiniteGroup>, field: &Field) -> Result<Representation> {
        let gen_images: Vec<Matrix> = group
            .generators()
            .iter()
            .map(|g| match g {
                GroupElement::Permutation { map } => {
                    let n = map.len();
                    let mut m = Matrix::zeros(field, n, n);
                    for (j, &img) in map.iter().enumerate() {
                        m.set_value(img as usize, j, 1);
                    }
                    Ok(m)
                }
                _ => Err(Error::InvalidInput(
                    "permutation action requires permutation elements".into(),
                )),
            })
            .collect::<Result<_>>()?;
        Representation::from_generator_images(group.clone(), field.clone(), gen_images)
    }

    // ------------------------------------------------------------ accessors

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_materialized(&self) -> bool {
        matches!(self.images, Images::Materialized(_))
    }

    pub fn gen_image(&self, s: usize) -> &Matrix {
        match &self.images {
            Images::Materialized(images) => &images[self.group.generator_index(s) as usize],
            Images::Lazy { gen_images } => &gen_images[s],
        }
    }

    /// All element images, when materialized (indexed by element index).
    pub fn materialized_images(&self) -> Option<&[Matrix]> {
        match &self.images {
            Images::Materialized(images) => Some(images),
            Images::Lazy { .. } => None,
        }
    }

    /// Image of element i; reconstructed through the enumeration tree when
    /// the representation is lazy.
    pub fn image(&self, i: u32) -> Matrix {
        match &self.images {
            Images::Materialized(images) => images[i as usize].clone(),
            Images::Lazy { gen_images } => {
                let parent = self.group.bfs_parent();
                let gen_of = self.group.bfs_gen();
                let mut word = Vec::new();
                let mut cur = i;
                while cur != 0 {
                    word.push(gen_of[cur as usize]);
                    cur = parent[cur as usize];
                }
                let mut img = Matrix::identity(&self.field, self.dim);
                for &s in word.iter().rev() {
                    img = gen_images[s as usize]
                        .mul(&img)
                        .expect("validated images multiply");
                }
                img
            }
        }
    }

    /// Trace of every element's image (materialized representations only).
    pub fn character(&self) -> Result<Vec<Scalar>> {
        match &self.images {
            Images::Materialized(images) => {
                images.iter().map(|m| m.trace()).collect::<Result<Vec<_>>>()
            }
            Images::Lazy { .. } => Err(Error::Precondition(
                "character requires materialized images".into(),
            )),
        }
    }

    // --------------------------------------------------------- constructions

    /// Contragredient: g acts by the inverse transpose.
    pub fn dual(&self) -> Result<Representation> {
        let gen_images: Vec<Matrix> = (0..self.group.generator_count())
            .map(|s| Ok(self.gen_image(s).inverse()?.transpose()))
            .collect::<Result<_>>()?;
        Representation::from_generator_images(self.group.clone(), self.field.clone(), gen_images)
    }

    /// Tensor product of two representations of the same group.
    pub fn tensor(&self, other: &Representation) -> Result<Representation> {
        if !Arc::ptr_eq(&self.group, &other.group) {
            return Err(Error::Precondition(
                "tensor factors must be representations of the same group".into(),
            ));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let gen_images: Vec<Matrix> = (0..self.group.generator_count())
            .map(|s| self.gen_image(s).kronecker(other.gen_image(s)))
            .collect::<Result<_>>()?;
        Representation::from_generator_images(self.group.clone(), self.field.clone(), gen_images)
    }

    /// V tensor V*: the action on linear endomorphisms of V.
    pub fn adjoint(&self) -> Result<Representation> {
        self.tensor(&self.dual()?)
    }

    /// Block-diagonal sum of two representations of the same group.
    pub fn direct_sum(&self, other: &Representation) -> Result<Representation> {
        if !Arc::ptr_eq(&self.group, &other.group) {
            return Err(Error::Precondition(
                "summands must be representations of the same group".into(),
            ));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let d = self.dim + other.dim;
        let gen_images: Vec<Matrix> = (0..self.group.generator_count())
            .map(|s| {
                let a = self.gen_image(s);
                let b = other.gen_image(s);
                let mut m = Matrix::zeros(&self.field, d, d);
                for r in 0..self.dim {
                    for c in 0..self.dim {
                        m.set_value(r, c, a.value_at(r, c));
                    }
                }
                for r in 0..other.dim {
                    for c in 0..other.dim {
                        m.set_value(self.dim + r, self.dim + c, b.value_at(r, c));
                    }
                }
                m
            })
            .collect();
        Representation::from_generator_images(self.group.clone(), self.field.clone(), gen_images)
    }

    /// Row-space basis of the simultaneous fixed space of the given elements
    /// (indices into the group): the intersection of the kernels of rho(s)-I.
    pub fn fixed_subspace(&self, element_indices: &[u32]) -> Result<Matrix> {
        if element_indices.is_empty() {
            return Err(Error::InvalidInput("fixed space needs at least one element".into()));
        }
        let d = self.dim;
        let mut stacked = Matrix::zeros(&self.field, d * element_indices.len(), d);
        for (k, &i) in element_indices.iter().enumerate() {
            let img = self.image(i);
            for r in 0..d {
                for c in 0..d {
                    let mut v = img.value_at(r, c);
                    if r == c {
                        v = self.field.spec().val_sub(v, 1);
                    }
                    stacked.set_value(k * d + r, c, v);
                }
            }
        }
        Ok(stacked.nullspace())
    }

    /// Averaging projector over a p'-order subset that forms a subgroup:
    /// |N|^{-1} sum of the images of N (indices into the group).
    pub fn reynolds(&self, normal: &[u32]) -> Result<Matrix> {
        let size = self.field.scalar_from_i64(normal.len() as i64);
        if size.value() == 0 {
            return Err(Error::Precondition(
                "averaging requires the subgroup order to be invertible in the field".into(),
            ));
        }
        let inv = self.field.inv(size)?;
        let mut sum = Matrix::zeros(&self.field, self.dim, self.dim);
        for &i in normal {
            sum = sum.add(&self.image(i))?;
        }
        sum.scalar_mul(inv)
    }

    /// Count of elements acting as the identity.
    pub fn kernel_size(&self) -> u64 {
        match &self.images {
            Images::Materialized(images) => {
                images.iter().filter(|m| m.is_identity()).count() as u64
            }
            Images::Lazy { .. } => (0..self.group.order() as u32)
                .filter(|&i| self.image(i).is_identity())
                .count() as u64,
        }
    }

    pub fn is_faithful(&self) -> bool {
        self.kernel_size() == 1
    }

    /// Restrict the action to the span of the given columns (dim x k, k
    /// independent columns). Fails when the span is not invariant.
    pub fn subrepresentation_on_columns(&self, columns: &Matrix) -> Result<Representation> {
        if columns.rows() != self.dim {
            return Err(Error::Dimension("column height must match the representation".into()));
        }
        let k = columns.cols();
        if k == 0 || columns.rank() != k {
            return Err(Error::InvalidInput("columns must be nonzero and independent".into()));
        }
        // Pivot rows: rref of the transpose marks pivot columns there, which
        // are row positions of `columns`; the k x k submatrix on those rows
        // is invertible and lets us solve for the action on the span.
        let (_, pivot_rows) = columns.transpose().rref();
        let mut sel = Matrix::zeros(&self.field, k, k);
        for (r, &pr) in pivot_rows.iter().enumerate() {
            for c in 0..k {
                sel.set_value(r, c, columns.value_at(pr, c));
            }
        }
        let sel_inv = sel.inverse()?;

        let mut gen_images = Vec::with_capacity(self.group.generator_count());
        for s in 0..self.group.generator_count() {
            let moved = self.gen_image(s).mul(columns)?; // dim x k
            let mut moved_sel = Matrix::zeros(&self.field, k, k);
            for (r, &pr) in pivot_rows.iter().enumerate() {
                for c in 0..k {
                    moved_sel.set_value(r, c, moved.value_at(pr, c));
                }
            }
            let action = sel_inv.mul(&moved_sel)?; // k x k, candidate action
            if columns.mul(&action)? != moved {
                return Err(Error::Precondition(
                    "columns do not span an invariant subspace".into(),
                ));
            }
            gen_images.push(action);
        }
        Representation::from_generator_images(self.group.clone(), self.field.clone(), gen_images)
    }
}

/// A maximal independent subset of the matrix's columns, as a new matrix
/// (keeps the original column vectors, not their reduced forms).
pub fn column_space_basis(m: &Matrix) -> Matrix {
    let (_, pivots) = m.rref();
    let mut out = Matrix::zeros(m.field(), m.rows(), pivots.len());
    for (k, &c) in pivots.iter().enumerate() {
        for r in 0..m.rows() {
            out.set_value(r, k, m.value_at(r, c));
        }
    }
    out
}

fn element_as_matrix(g: &GroupElement, field: &Field) -> Result<Matrix> {
    match g {
        GroupElement::Matrix { mat, projective } => {
            if *projective {
                return Err(Error::InvalidInput(
                    "projective matrix elements have no canonical linear action".into(),
                ));
            }
            if mat.field() != field {
                return Err(Error::FieldMismatch);
            }
            Ok(mat.clone())
        }
        GroupElement::Monomial { field: f, perm, scalars } => {
            if f != field {
                return Err(Error::FieldMismatch);
            }
            let n = perm.len();
            let mut m = Matrix::zeros(field, n, n);
            for j in 0..n {
                m.set_value(perm[j] as usize, j, scalars[j]);
            }
            Ok(m)
        }
        _ => Err(Error::InvalidInput(
            "no natural matrix action for this element shape".into(),
        )),
    }
}

/// images[i] for i < len, built along the enumeration tree.
fn build_prefix_images(
    group: &Arc<FiniteGroup>,
    field: &Field,
    dim: usize,
    gen_images: &[Matrix],
    len: usize,
) -> Result<Vec<Matrix>> {
    let parent = group.bfs_parent();
    let gen_of = group.bfs_gen();
    let mut images = Vec::with_capacity(len);
    images.push(Matrix::identity(field, dim));
    for i in 1..len {
        let img = gen_images[gen_of[i] as usize].mul(&images[parent[i] as usize])?;
        images.push(img);
    }
    Ok(images)
}

/// Check every multiplication-table edge that stays inside the materialized
/// prefix: images[s dot g] must equal gen_images[s] * images[g]. Tree edges
/// hold by construction; the others are the actual homomorphism constraints.
fn validate_prefix_edges(
    group: &Arc<FiniteGroup>,
    gen_images: &[Matrix],
    images: &[Matrix],
) -> Result<()> {
    let parent = group.bfs_parent();
    let gen_of = group.bfs_gen();
    let table = group.gen_table();
    let len = images.len();
    for (s, row) in table.iter().enumerate() {
        for g in 0..len.min(row.len()) {
            let target = row[g] as usize;
            if target >= len {
                continue;
            }
            if parent[target] as usize == g && gen_of[target] as usize == s && target != 0 {
                continue; // tree edge, true by construction
            }
            let lhs = gen_images[s].mul(&images[g])?;
            if lhs != images[target] {
                return Err(Error::NotHomomorphism(format!(
                    "generator {s} applied to element {g} does not match element {target}"
                )));
            }
        }
    }
    Ok(())
}

/// Induce a representation of a subgroup up to the whole group. `sub` must be
/// an independently enumerated group whose elements all belong to `big`, and
/// `w` a representation of `sub`. The result acts on functions supported on
/// the left cosets of the subgroup, with generator blocks W(rep_i^{-1} s rep_j)
/// at the unique coset i reached from j.
pub fn induce(
    big: &Arc<FiniteGroup>,
    sub: &Arc<FiniteGroup>,
    w: &Representation,
) -> Result<Representation> {
    if !Arc::ptr_eq(w.group(), sub) {
        return Err(Error::Precondition(
            "the inner representation must live on the given subgroup".into(),
        ));
    }
    let mut sub_in_big = Vec::with_capacity(sub.order() as usize);
    for el in sub.elements() {
        sub_in_big.push(big.index_of(el).ok_or(Error::NotSubgroup)?);
    }
    let mut k_sorted = sub_in_big.clone();
    k_sorted.sort_unstable();

    let cosets = big.left_cosets(&k_sorted);
    let m = cosets.len();
    let d = w.dim();
    let dim = m
        .checked_mul(d)
        .filter(|&v| v <= 4096)
        .ok_or_else(|| Error::BudgetExceeded("induced dimension above supported size".into()))?;

    let mut coset_of = vec![0u32; big.order() as usize];
    let mut reps = Vec::with_capacity(m);
    for (ci, coset) in cosets.iter().enumerate() {
        reps.push(coset[0]);
        for &x in coset {
            coset_of[x as usize] = ci as u32;
        }
    }
    let to_sub: HashMap<u32, u32> = sub_in_big
        .iter()
        .enumerate()
        .map(|(si, &bi)| (bi, si as u32))
        .collect();

    let field = w.field().clone();
    let mut gen_images = Vec::with_capacity(big.generator_count());
    for s in 0..big.generator_count() {
        let si = big.generator_index(s);
        let mut img = Matrix::zeros(&field, dim, dim);
        for (j, &gj) in reps.iter().enumerate() {
            let x = big.mul_indices(si, gj); // s * rep_j
            let i = coset_of[x as usize] as usize;
            let k_big = big.mul_indices(big.inverse_index(reps[i]), x); // rep_i^{-1} s rep_j
            let k_sub = *to_sub
                .get(&k_big)
                .expect("rep_i^{-1} s rep_j lies in the subgroup by coset choice");
            let block = w.image(k_sub);
            for r in 0..d {
                for c in 0..d {
                    img.set_value(i * d + r, j * d + c, block.value_at(r, c));
                }
            }
        }
        gen_images.push(img);
    }
    Representation::from_generator_images(big.clone(), field, gen_images)
}
