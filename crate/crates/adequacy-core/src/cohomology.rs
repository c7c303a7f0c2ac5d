//! First cohomology of a representation, by exact linear algebra.
//!
//! A 1-cocycle is a map f: G -> V with f(gh) = f(g) + g.f(h); it is
//! determined by its values on the generators. Walking the enumeration tree
//! expresses f at every element as a linear function of those generator
//! values, and every non-tree edge of the multiplication table contributes a
//! linear constraint. The cocycle space Z1 is the kernel of the accumulated
//! constraints; the coboundaries B1 (maps g -> g.m - m) contribute dim V
//! minus the dimension of the fixed space; H1 is the difference.

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SpanAccumulator};
use crate::modrep::Representation;
use std::sync::Arc;

use crate::groups::FiniteGroup;

/// Operation budget: |G| * generators * dim^2 must stay below this.
const H1_OP_BUDGET: u128 = 1_000_000_000;
/// Stored propagation entries: |G| * dim * (generators * dim).
const H1_ENTRY_BUDGET: u128 = 200_000_000;

/// Dimensions of the cocycle space, coboundary space, and their quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct H1Summary {
    pub z1: usize,
    pub b1: usize,
    pub h1: usize,
}

fn check_budget(rep: &Representation) -> Result<()> {
    let n = rep.group().order() as u128;
    let u = rep.group().generator_count() as u128;
    let d = rep.dim() as u128;
    if n * u * d * d > H1_OP_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "cocycle system of {} elements x {} generators x dim {} is too large",
            n,
            u,
            rep.dim()
        )));
    }
    if n * d * (u * d) > H1_ENTRY_BUDGET {
        return Err(Error::BudgetExceeded(
            "cocycle propagation table would not fit in memory".into(),
        ));
    }
    Ok(())
}

/// Rows form a basis of the cocycle space Z1, as vectors of generator values
/// (the value on generator s occupies columns s*dim .. s*dim + dim).
pub fn cocycle_basis(rep: &Representation) -> Result<Matrix> {
    check_budget(rep)?;
    let group = rep.group().clone();
    let field = rep.field().clone();
    let spec = field.spec();
    let d = rep.dim();
    let u = group.generator_count();
    let unknowns = u * d;
    let n = group.order() as usize;

    let parent = group.bfs_parent();
    let gen_of = group.bfs_gen();
    let gen_images: Vec<Matrix> = (0..u).map(|s| rep.gen_image(s).clone()).collect();

    // Propagation: value of the cocycle at element i as a d x unknowns map.
    let mut l: Vec<Matrix> = Vec::with_capacity(n);
    l.push(Matrix::zeros(&field, d, unknowns));
    for i in 1..n {
        let s = gen_of[i] as usize;
        let mut li = gen_images[s].mul(&l[parent[i] as usize])?;
        for r in 0..d {
            let col = s * d + r;
            li.set_value(r, col, spec.val_add(li.value_at(r, col), 1));
        }
        l.push(li);
    }

    let mut acc = SpanAccumulator::new(&field, unknowns);
    'edges: for (s, row) in group.gen_table().iter().enumerate() {
        for (g, &target) in row.iter().enumerate() {
            let t = target as usize;
            if t != 0 && parent[t] as usize == g && gen_of[t] as usize == s {
                continue; // tree edge: satisfied by construction
            }
            // f(s) + s.f(g) - f(t) = 0, one constraint row per coordinate.
            let mut c = gen_images[s].mul(&l[g])?;
            for r in 0..d {
                let col = s * d + r;
                c.set_value(r, col, spec.val_add(c.value_at(r, col), 1));
            }
            let diff = c.sub(&l[t])?;
            for r in 0..d {
                let row_vals: Vec<u32> = (0..unknowns).map(|k| diff.value_at(r, k)).collect();
                acc.insert_values(&row_vals);
            }
            if acc.is_full() {
                break 'edges;
            }
        }
    }

    if acc.rank() == 0 {
        return Ok(Matrix::identity(&field, unknowns));
    }
    let constraints = Matrix::from_scalars(&field, &acc.basis())?;
    Ok(constraints.nullspace())
}

/// z1, b1 and h1 = z1 - b1 for the given representation.
pub fn h1_dimension(rep: &Representation) -> Result<H1Summary> {
    let z1 = cocycle_basis(rep)?.rows();
    let group = rep.group();
    let gen_indices: Vec<u32> = (0..group.generator_count())
        .map(|s| group.generator_index(s))
        .collect();
    let fixed = rep.fixed_subspace(&gen_indices)?.rows();
    let b1 = rep.dim() - fixed;
    if z1 < b1 {
        return Err(Error::Precondition(
            "internal inconsistency: coboundaries exceed cocycles".into(),
        ));
    }
    Ok(H1Summary {
        z1,
        b1,
        h1: z1 - b1,
    })
}

/// Expand a cocycle, given by its generator values (a row of `cocycle_basis`),
/// into its packed value at every group element.
pub fn expand_cocycle(rep: &Representation, gen_values: &[u32]) -> Result<Vec<Vec<u32>>> {
    let group = rep.group();
    let d = rep.dim();
    let u = group.generator_count();
    if gen_values.len() != u * d {
        return Err(Error::Dimension("cocycle vector length".into()));
    }
    let spec = rep.field().spec();
    let parent = group.bfs_parent();
    let gen_of = group.bfs_gen();
    let n = group.order() as usize;
    let mut values: Vec<Vec<u32>> = Vec::with_capacity(n);
    values.push(vec![0u32; d]);
    for i in 1..n {
        let s = gen_of[i] as usize;
        let acted = rep.gen_image(s).mul_vec_values(&values[parent[i] as usize]);
        let mut v = Vec::with_capacity(d);
        for r in 0..d {
            v.push(spec.val_add(gen_values[s * d + r], acted[r]));
        }
        values.push(v);
    }
    Ok(values)
}

/// Independent count of dim H1(G, k) for the one-dimensional trivial module
/// in characteristic p: homomorphisms G -> (k, +) factor through the
/// abelianization, one dimension per invariant factor divisible by p.
pub fn h1_trivial_count(group: &Arc<FiniteGroup>, p: u64) -> Result<usize> {
    let invariants = FiniteGroup::abelianization_invariants(group)?;
    Ok(invariants.iter().filter(|&&m| m % p == 0).count())
}
