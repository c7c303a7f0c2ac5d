//! Concrete group element shapes.
//!
//! Every variant provides exact multiplication, inversion, an identity of the
//! same shape, and a canonical byte encoding that is injective on any group
//! built from compatible elements. Projective matrix elements are kept in a
//! canonical representative of {M, -M} at all times, so structural equality
//! coincides with group-element equality for every variant.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

use super::group::QuotientCtx;

/// Shape of an element family: enough information to decode canonical bytes
/// back into elements, and to key caches. Quotient elements have no
/// self-contained shape (they reference a live parent group) and are
/// deliberately not representable here.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum ShapeDescriptor {
    Matrix {
        p: u64,
        s: u32,
        n: u32,
        projective: bool,
    },
    Permutation {
        n: u32,
    },
    Monomial {
        p: u64,
        s: u32,
        n: u32,
    },
    Semidirect {
        modulus: u32,
        len: u32,
        outer: Box<ShapeDescriptor>,
    },
}

impl fmt::Display for ShapeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeDescriptor::Matrix { p, s, n, projective } => {
                if *projective {
                    write!(f, "mat{}(GF({}^{}))/±I", n, p, s)
                } else {
                    write!(f, "mat{}(GF({}^{}))", n, p, s)
                }
            }
            ShapeDescriptor::Permutation { n } => write!(f, "perm{}", n),
            ShapeDescriptor::Monomial { p, s, n } => write!(f, "mono{}(GF({}^{}))", n, p, s),
            ShapeDescriptor::Semidirect { modulus, len, outer } => {
                write!(f, "(Z{})^{} : {}", modulus, len, outer)
            }
        }
    }
}

/// A group element. See the module docs for the invariants each shape keeps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupElement {
    /// Invertible matrix, optionally taken modulo ±I (`projective`). The
    /// projective canonical representative is the one of {M, -M} whose first
    /// nonzero row-major entry is the smaller of the pair {x, -x}.
    Matrix { mat: Matrix, projective: bool },
    /// Bijection on {0..n-1}; `map[i]` is the image of point i. Products
    /// compose left-to-right through application: (g*h)(i) = g(h(i)).
    Permutation { map: Vec<u32> },
    /// Monomial transformation: basis vector e_j maps to c_j * e_{perm[j]}
    /// with every scalar nonzero. Scalars are packed field values.
    Monomial {
        field: Field,
        perm: Vec<u32>,
        scalars: Vec<u32>,
    },
    /// Element (v, h) of (Z_modulus)^len ⋊ ⟨outer shape⟩ with product
    /// (v1, h1)(v2, h2) = (v1 + h1·v2, h1 h2). A matrix outer part acts
    /// linearly (its field must be the prime field of size `modulus`); a
    /// permutation outer part permutes coordinates.
    Semidirect {
        modulus: u32,
        vec: Vec<u32>,
        outer: Box<GroupElement>,
    },
    /// Coset of a normal subgroup, represented by the member with the least
    /// index in the parent group's enumeration order.
    Quotient { ctx: Arc<QuotientCtx>, rep: u32 },
}

fn width_for(max: u64) -> usize {
    match max {
        0..=0xFF => 1,
        0x100..=0xFFFF => 2,
        0x1_0000..=0xFF_FFFF => 3,
        _ => 4,
    }
}

fn push_le(buf: &mut Vec<u8>, value: u64, width: usize) {
    for k in 0..width {
        buf.push(((value >> (8 * k)) & 0xFF) as u8);
    }
}

fn read_le(bytes: &[u8], at: &mut usize, width: usize) -> Result<u64> {
    if *at + width > bytes.len() {
        return Err(Error::InvalidInput("truncated element encoding".into()));
    }
    let mut v = 0u64;
    for k in 0..width {
        v |= (bytes[*at + k] as u64) << (8 * k);
    }
    *at += width;
    Ok(v)
}

/// Negate a projective matrix in place onto the canonical member of {M, -M}.
fn canonicalize_projective(mat: &mut Matrix) {
    let spec = mat.field().clone();
    let spec = spec.spec();
    for r in 0..mat.rows() {
        for c in 0..mat.cols() {
            let v = mat.value_at(r, c);
            if v != 0 {
                if spec.val_neg(v) < v {
                    for rr in 0..mat.rows() {
                        for cc in 0..mat.cols() {
                            mat.set_value(rr, cc, spec.val_neg(mat.value_at(rr, cc)));
                        }
                    }
                }
                return;
            }
        }
    }
}

impl GroupElement {
    // ---------------------------------------------------------------- ctors

    pub fn matrix(mat: Matrix) -> Result<GroupElement> {
        if !mat.is_square() || mat.rows() == 0 {
            return Err(Error::InvalidInput("matrix element must be square and nonempty".into()));
        }
        if mat.rows() > 255 {
            return Err(Error::InvalidInput("matrix element dimension above 255".into()));
        }
        Ok(GroupElement::Matrix { mat, projective: false })
    }

    pub fn projective_matrix(mut mat: Matrix) -> Result<GroupElement> {
        if !mat.is_square() || mat.rows() == 0 {
            return Err(Error::InvalidInput("matrix element must be square and nonempty".into()));
        }
        if mat.rows() > 255 {
            return Err(Error::InvalidInput("matrix element dimension above 255".into()));
        }
        canonicalize_projective(&mut mat);
        Ok(GroupElement::Matrix { mat, projective: true })
    }

    pub fn permutation(map: Vec<u32>) -> Result<GroupElement> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &i in &map {
            if (i as usize) >= n || seen[i as usize] {
                return Err(Error::InvalidInput("permutation map is not a bijection".into()));
            }
            seen[i as usize] = true;
        }
        Ok(GroupElement::Permutation { map })
    }

    pub fn monomial(field: &Field, perm: Vec<u32>, scalars: Vec<crate::field::Scalar>) -> Result<GroupElement> {
        let n = perm.len();
        if scalars.len() != n {
            return Err(Error::Dimension("monomial scalar count != point count".into()));
        }
        let mut seen = vec![false; n];
        for &i in &perm {
            if (i as usize) >= n || seen[i as usize] {
                return Err(Error::InvalidInput("monomial permutation is not a bijection".into()));
            }
            seen[i as usize] = true;
        }
        let mut packed = Vec::with_capacity(n);
        for &c in &scalars {
            if !field.contains(c) {
                return Err(Error::FieldMismatch);
            }
            if c.value() == 0 {
                return Err(Error::InvalidInput("monomial scalar must be nonzero".into()));
            }
            packed.push(c.value());
        }
        Ok(GroupElement::Monomial {
            field: field.clone(),
            perm,
            scalars: packed,
        })
    }

    pub fn semidirect(modulus: u32, vec: Vec<u32>, outer: GroupElement) -> Result<GroupElement> {
        if modulus < 2 {
            return Err(Error::InvalidInput("semidirect modulus must be at least 2".into()));
        }
        if vec.iter().any(|&v| v >= modulus) {
            return Err(Error::InvalidInput("semidirect vector entry out of range".into()));
        }
        match &outer {
            GroupElement::Matrix { mat, projective } => {
                if *projective {
                    return Err(Error::InvalidInput(
                        "projective matrices cannot act on a vector part".into(),
                    ));
                }
                if mat.field().s() != 1 || mat.field().p() != modulus as u64 {
                    return Err(Error::InvalidInput(
                        "matrix action requires the prime field of the vector modulus".into(),
                    ));
                }
                if mat.rows() != vec.len() {
                    return Err(Error::Dimension("matrix action size != vector length".into()));
                }
            }
            GroupElement::Permutation { map } => {
                if map.len() != vec.len() {
                    return Err(Error::Dimension("permutation action size != vector length".into()));
                }
            }
            _ => {
                return Err(Error::InvalidInput(
                    "semidirect outer part must be a matrix or a permutation".into(),
                ))
            }
        }
        Ok(GroupElement::Semidirect {
            modulus,
            vec,
            outer: Box::new(outer),
        })
    }

    pub(crate) fn quotient(ctx: Arc<QuotientCtx>, rep: u32) -> GroupElement {
        GroupElement::Quotient { ctx, rep }
    }

    // ------------------------------------------------------------ structure

    pub fn shape(&self) -> Option<ShapeDescriptor> {
        match self {
            GroupElement::Matrix { mat, projective } => Some(ShapeDescriptor::Matrix {
                p: mat.field().p(),
                s: mat.field().s(),
                n: mat.rows() as u32,
                projective: *projective,
            }),
            GroupElement::Permutation { map } => Some(ShapeDescriptor::Permutation { n: map.len() as u32 }),
            GroupElement::Monomial { field, perm, .. } => Some(ShapeDescriptor::Monomial {
                p: field.p(),
                s: field.s(),
                n: perm.len() as u32,
            }),
            GroupElement::Semidirect { modulus, vec, outer } => Some(ShapeDescriptor::Semidirect {
                modulus: *modulus,
                len: vec.len() as u32,
                outer: Box::new(outer.shape()?),
            }),
            GroupElement::Quotient { .. } => None,
        }
    }

    pub fn compatible_with(&self, other: &GroupElement) -> bool {
        match (self, other) {
            (GroupElement::Quotient { ctx: a, .. }, GroupElement::Quotient { ctx: b, .. }) => {
                Arc::ptr_eq(a, b)
            }
            _ => match (self.shape(), other.shape()) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            },
        }
    }

    fn incompatible(&self, other: &GroupElement) -> Error {
        Error::Incompatible(format!(
            "elements of different families: {} vs {}",
            self.shape().map_or_else(|| "quotient".to_string(), |s| s.to_string()),
            other.shape().map_or_else(|| "quotient".to_string(), |s| s.to_string()),
        ))
    }

    // ------------------------------------------------------------ group ops

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        match (self, other) {
            (
                GroupElement::Matrix { mat: a, projective: pa },
                GroupElement::Matrix { mat: b, projective: pb },
            ) if pa == pb => {
                let mut prod = a.mul(b)?;
                if *pa {
                    canonicalize_projective(&mut prod);
                }
                Ok(GroupElement::Matrix { mat: prod, projective: *pa })
            }
            (GroupElement::Permutation { map: a }, GroupElement::Permutation { map: b })
                if a.len() == b.len() =>
            {
                let map = b.iter().map(|&i| a[i as usize]).collect();
                Ok(GroupElement::Permutation { map })
            }
            (
                GroupElement::Monomial { field: fa, perm: pa, scalars: ca },
                GroupElement::Monomial { field: fb, perm: pb, scalars: cb },
            ) if fa == fb && pa.len() == pb.len() => {
                let spec = fa.spec();
                let n = pa.len();
                let mut perm = Vec::with_capacity(n);
                let mut scalars = Vec::with_capacity(n);
                for j in 0..n {
                    let mid = pb[j] as usize;
                    perm.push(pa[mid]);
                    scalars.push(spec.val_mul(ca[mid], cb[j]));
                }
                Ok(GroupElement::Monomial { field: fa.clone(), perm, scalars })
            }
            (
                GroupElement::Semidirect { modulus: ma, vec: va, outer: oa },
                GroupElement::Semidirect { modulus: mb, vec: vb, outer: ob },
            ) if ma == mb && va.len() == vb.len() => {
                let acted = act_on_vector(oa, *ma, vb)?;
                let vec = va
                    .iter()
                    .zip(&acted)
                    .map(|(&x, &y)| {
                        let s = x as u64 + y as u64;
                        (s % *ma as u64) as u32
                    })
                    .collect();
                let outer = oa.mul(ob)?;
                Ok(GroupElement::Semidirect { modulus: *ma, vec, outer: Box::new(outer) })
            }
            (GroupElement::Quotient { ctx: ca, rep: ra }, GroupElement::Quotient { ctx: cb, rep: rb })
                if Arc::ptr_eq(ca, cb) =>
            {
                let idx = ca.parent_product(*ra, *rb)?;
                Ok(GroupElement::Quotient { ctx: ca.clone(), rep: ca.canonical_rep(idx)? })
            }
            _ => Err(self.incompatible(other)),
        }
    }

    pub fn inverse(&self) -> Result<GroupElement> {
        match self {
            GroupElement::Matrix { mat, projective } => {
                let mut inv = mat.inverse()?;
                if *projective {
                    canonicalize_projective(&mut inv);
                }
                Ok(GroupElement::Matrix { mat: inv, projective: *projective })
            }
            GroupElement::Permutation { map } => {
                let mut inv = vec![0u32; map.len()];
                for (i, &img) in map.iter().enumerate() {
                    inv[img as usize] = i as u32;
                }
                Ok(GroupElement::Permutation { map: inv })
            }
            GroupElement::Monomial { field, perm, scalars } => {
                let spec = field.spec();
                let n = perm.len();
                let mut ip = vec![0u32; n];
                for (j, &img) in perm.iter().enumerate() {
                    ip[img as usize] = j as u32;
                }
                let mut sc = Vec::with_capacity(n);
                for j in 0..n {
                    let src = ip[j] as usize;
                    sc.push(spec.val_inv(scalars[src]).ok_or(Error::ZeroInverse)?);
                }
                Ok(GroupElement::Monomial { field: field.clone(), perm: ip, scalars: sc })
            }
            GroupElement::Semidirect { modulus, vec, outer } => {
                let oinv = outer.inverse()?;
                let acted = act_on_vector(&oinv, *modulus, vec)?;
                let neg = acted
                    .iter()
                    .map(|&x| if x == 0 { 0 } else { modulus - x })
                    .collect();
                Ok(GroupElement::Semidirect { modulus: *modulus, vec: neg, outer: Box::new(oinv) })
            }
            GroupElement::Quotient { ctx, rep } => {
                let idx = ctx.parent_inverse(*rep)?;
                Ok(GroupElement::Quotient { ctx: ctx.clone(), rep: ctx.canonical_rep(idx)? })
            }
        }
    }

    pub fn identity_like(&self) -> GroupElement {
        match self {
            GroupElement::Matrix { mat, projective } => GroupElement::Matrix {
                mat: Matrix::identity(mat.field(), mat.rows()),
                projective: *projective,
            },
            GroupElement::Permutation { map } => GroupElement::Permutation {
                map: (0..map.len() as u32).collect(),
            },
            GroupElement::Monomial { field, perm, .. } => GroupElement::Monomial {
                field: field.clone(),
                perm: (0..perm.len() as u32).collect(),
                scalars: vec![1; perm.len()],
            },
            GroupElement::Semidirect { modulus, vec, outer } => GroupElement::Semidirect {
                modulus: *modulus,
                vec: vec![0; vec.len()],
                outer: Box::new(outer.identity_like()),
            },
            GroupElement::Quotient { ctx, .. } => GroupElement::Quotient { ctx: ctx.clone(), rep: 0 },
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupElement::Matrix { mat, .. } => mat.is_identity(),
            GroupElement::Permutation { map } => map.iter().enumerate().all(|(i, &x)| i as u32 == x),
            GroupElement::Monomial { perm, scalars, .. } => {
                perm.iter().enumerate().all(|(i, &x)| i as u32 == x)
                    && scalars.iter().all(|&c| c == 1)
            }
            GroupElement::Semidirect { vec, outer, .. } => {
                vec.iter().all(|&v| v == 0) && outer.is_identity()
            }
            GroupElement::Quotient { rep, .. } => *rep == 0,
        }
    }

    pub fn pow(&self, mut e: u64) -> Result<GroupElement> {
        let mut acc = self.identity_like();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    // ------------------------------------------------------------- encoding

    /// Canonical byte encoding: injective across any set of compatible
    /// elements, and stable across runs (used for index keys, cache files,
    /// and certificate payloads).
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.encode_into(&mut buf);
        buf
    }

    fn encode_into(&self, buf: &mut Vec<u8>) {
        match self {
            GroupElement::Matrix { mat, projective } => {
                let w = width_for(mat.field().q() - 1);
                buf.push(1);
                buf.push(u8::from(*projective));
                buf.push(mat.rows() as u8);
                buf.push(w as u8);
                for r in 0..mat.rows() {
                    for c in 0..mat.cols() {
                        push_le(buf, mat.value_at(r, c) as u64, w);
                    }
                }
            }
            GroupElement::Permutation { map } => {
                let w = width_for(map.len().saturating_sub(1) as u64);
                buf.push(2);
                push_le(buf, map.len() as u64, 4);
                buf.push(w as u8);
                for &i in map {
                    push_le(buf, i as u64, w);
                }
            }
            GroupElement::Monomial { field, perm, scalars } => {
                let wp = width_for(perm.len().saturating_sub(1) as u64);
                let ws = width_for(field.q() - 1);
                buf.push(3);
                push_le(buf, perm.len() as u64, 4);
                buf.push(wp as u8);
                buf.push(ws as u8);
                for &i in perm {
                    push_le(buf, i as u64, wp);
                }
                for &c in scalars {
                    push_le(buf, c as u64, ws);
                }
            }
            GroupElement::Semidirect { modulus, vec, outer } => {
                let wv = width_for(*modulus as u64 - 1);
                buf.push(4);
                push_le(buf, *modulus as u64, 4);
                push_le(buf, vec.len() as u64, 4);
                buf.push(wv as u8);
                for &v in vec {
                    push_le(buf, v as u64, wv);
                }
                outer.encode_into(buf);
            }
            GroupElement::Quotient { rep, .. } => {
                buf.push(5);
                push_le(buf, *rep as u64, 4);
            }
        }
    }

    /// Decode canonical bytes produced by elements of the given shape.
    pub fn decode(shape: &ShapeDescriptor, bytes: &[u8]) -> Result<GroupElement> {
        let mut at = 0usize;
        let el = Self::decode_at(shape, bytes, &mut at)?;
        if at != bytes.len() {
            return Err(Error::InvalidInput("trailing bytes after element encoding".into()));
        }
        Ok(el)
    }

    fn decode_at(shape: &ShapeDescriptor, bytes: &[u8], at: &mut usize) -> Result<GroupElement> {
        let bad = || Error::InvalidInput("element encoding does not match its shape".into());
        match shape {
            ShapeDescriptor::Matrix { p, s, n, projective } => {
                let field = Field::new(*p, *s)?;
                let w = width_for(field.q() - 1);
                let header = [1u8, u8::from(*projective), *n as u8, w as u8];
                if bytes.len() < *at + 4 || bytes[*at..*at + 4] != header {
                    return Err(bad());
                }
                *at += 4;
                let n = *n as usize;
                let mut entries = Vec::with_capacity(n * n);
                for _ in 0..n * n {
                    let v = read_le(bytes, at, w)?;
                    if v >= field.q() {
                        return Err(bad());
                    }
                    entries.push(v as u32);
                }
                let mat = Matrix::from_raw_values(&field, n, n, entries);
                if *projective {
                    GroupElement::projective_matrix(mat)
                } else {
                    GroupElement::matrix(mat)
                }
            }
            ShapeDescriptor::Permutation { n } => {
                if bytes.len() < *at + 1 || bytes[*at] != 2 {
                    return Err(bad());
                }
                *at += 1;
                let len = read_le(bytes, at, 4)? as u32;
                if len != *n {
                    return Err(bad());
                }
                let w = width_for(len.saturating_sub(1) as u64);
                if read_le(bytes, at, 1)? as usize != w {
                    return Err(bad());
                }
                let mut map = Vec::with_capacity(len as usize);
                for _ in 0..len {
                    map.push(read_le(bytes, at, w)? as u32);
                }
                GroupElement::permutation(map)
            }
            ShapeDescriptor::Monomial { p, s, n } => {
                let field = Field::new(*p, *s)?;
                if bytes.len() < *at + 1 || bytes[*at] != 3 {
                    return Err(bad());
                }
                *at += 1;
                let len = read_le(bytes, at, 4)? as u32;
                if len != *n {
                    return Err(bad());
                }
                let wp = width_for(len.saturating_sub(1) as u64);
                let ws = width_for(field.q() - 1);
                if read_le(bytes, at, 1)? as usize != wp || read_le(bytes, at, 1)? as usize != ws {
                    return Err(bad());
                }
                let mut perm = Vec::with_capacity(len as usize);
                for _ in 0..len {
                    perm.push(read_le(bytes, at, wp)? as u32);
                }
                let mut scalars = Vec::with_capacity(len as usize);
                for _ in 0..len {
                    let v = read_le(bytes, at, ws)?;
                    if v == 0 || v >= field.q() {
                        return Err(bad());
                    }
                    scalars.push(field.scalar_unchecked(v as u32));
                }
                GroupElement::monomial(&field, perm, scalars)
            }
            ShapeDescriptor::Semidirect { modulus, len, outer } => {
                if bytes.len() < *at + 1 || bytes[*at] != 4 {
                    return Err(bad());
                }
                *at += 1;
                if read_le(bytes, at, 4)? as u32 != *modulus || read_le(bytes, at, 4)? as u32 != *len {
                    return Err(bad());
                }
                let wv = width_for(*modulus as u64 - 1);
                if read_le(bytes, at, 1)? as usize != wv {
                    return Err(bad());
                }
                let mut vec = Vec::with_capacity(*len as usize);
                for _ in 0..*len {
                    let v = read_le(bytes, at, wv)? as u32;
                    if v >= *modulus {
                        return Err(bad());
                    }
                    vec.push(v);
                }
                let outer_el = Self::decode_at(outer, bytes, at)?;
                GroupElement::semidirect(*modulus, vec, outer_el)
            }
        }
    }
}

/// Apply the outer part's action to a vector over Z_modulus.
fn act_on_vector(outer: &GroupElement, modulus: u32, vec: &[u32]) -> Result<Vec<u32>> {
    match outer {
        GroupElement::Matrix { mat, .. } => {
            let n = vec.len();
            let mut out = vec![0u32; n];
            let m = modulus as u64;
            for i in 0..n {
                let mut acc = 0u64;
                for (j, &v) in vec.iter().enumerate() {
                    acc = (acc + mat.value_at(i, j) as u64 * v as u64) % m;
                }
                out[i] = acc as u32;
            }
            Ok(out)
        }
        GroupElement::Permutation { map } => {
            let mut out = vec![0u32; vec.len()];
            for (i, &v) in vec.iter().enumerate() {
                out[map[i] as usize] = v;
            }
            Ok(out)
        }
        _ => Err(Error::InvalidInput("unsupported action shape".into())),
    }
}

fn cycles_string(map: &[u32]) -> String {
    let n = map.len();
    let mut seen = vec![false; n];
    let mut out = String::new();
    for start in 0..n {
        if seen[start] || map[start] as usize == start {
            seen[start] = true;
            continue;
        }
        let mut cyc = vec![start];
        seen[start] = true;
        let mut cur = map[start] as usize;
        while cur != start {
            seen[cur] = true;
            cyc.push(cur);
            cur = map[cur] as usize;
        }
        out.push('(');
        out.push_str(
            &cyc.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        );
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Matrix { mat, projective } => {
                let mut rows = Vec::new();
                for r in 0..mat.rows() {
                    let row: Vec<String> = (0..mat.cols())
                        .map(|c| mat.field().render(mat.at(r, c)))
                        .collect();
                    rows.push(format!("[{}]", row.join(",")));
                }
                write!(f, "[{}]", rows.join(","))?;
                if *projective {
                    write!(f, " mod ±I")?;
                }
                Ok(())
            }
            GroupElement::Permutation { map } => write!(f, "{}", cycles_string(map)),
            GroupElement::Monomial { field, perm, scalars } => {
                let sc: Vec<String> = scalars
                    .iter()
                    .map(|&c| field.render(field.scalar_unchecked(c)))
                    .collect();
                write!(f, "{} · diag({})", cycles_string(perm), sc.join(","))
            }
            GroupElement::Semidirect { vec, outer, .. } => {
                let vs: Vec<String> = vec.iter().map(|v| v.to_string()).collect();
                write!(f, "({}) ⋊ {}", vs.join(","), outer)
            }
            GroupElement::Quotient { rep, .. } => write!(f, "coset#{}", rep),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::linalg::Matrix;

    fn f5() -> Field {
        Field::new(5, 1).unwrap()
    }

    /// The matrix that a monomial element represents: column j carries c_j in
    /// row perm[j].
    fn monomial_as_matrix(el: &GroupElement) -> Matrix {
        match el {
            GroupElement::Monomial { field, perm, scalars } => {
                let n = perm.len();
                let mut m = Matrix::zeros(field, n, n);
                for j in 0..n {
                    m.set_value(perm[j] as usize, j, scalars[j]);
                }
                m
            }
            _ => panic!("not a monomial element"),
        }
    }

    #[test]
    fn monomial_products_match_their_matrices() {
        let f = f5();
        let a = GroupElement::monomial(
            &f,
            vec![1, 2, 0],
            vec![f.scalar_from_i64(2), f.scalar_from_i64(1), f.scalar_from_i64(4)],
        )
        .unwrap();
        let b = GroupElement::monomial(
            &f,
            vec![2, 0, 1],
            vec![f.scalar_from_i64(3), f.scalar_from_i64(3), f.scalar_from_i64(1)],
        )
        .unwrap();
        let ab = a.mul(&b).unwrap();
        assert_eq!(
            monomial_as_matrix(&ab),
            monomial_as_matrix(&a).mul(&monomial_as_matrix(&b)).unwrap()
        );
        let ai = a.inverse().unwrap();
        assert!(a.mul(&ai).unwrap().is_identity());
        assert_eq!(
            monomial_as_matrix(&ai),
            monomial_as_matrix(&a).inverse().unwrap()
        );
        // Associativity spot check.
        assert_eq!(
            a.mul(&b).unwrap().mul(&a).unwrap(),
            a.mul(&b.mul(&a).unwrap()).unwrap()
        );
    }

    #[test]
    fn projective_matrices_identify_negatives() {
        let f = f5();
        let m = Matrix::from_i64(&f, &[&[1, 2], &[3, 4]]).unwrap();
        let neg = m.neg();
        let a = GroupElement::projective_matrix(m.clone()).unwrap();
        let b = GroupElement::projective_matrix(neg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.canonical_bytes(), b.canonical_bytes());
        // Without the quotient they differ.
        let c = GroupElement::matrix(m.clone()).unwrap();
        let d = GroupElement::matrix(m.neg()).unwrap();
        assert_ne!(c, d);
        // -I is the projective identity.
        let minus_i = Matrix::from_i64(&f, &[&[-1, 0], &[0, -1]]).unwrap();
        assert!(GroupElement::projective_matrix(minus_i).unwrap().is_identity());
    }

    #[test]
    fn semidirect_arithmetic_with_matrix_action() {
        let f = f5();
        let h1 = GroupElement::matrix(Matrix::from_i64(&f, &[&[2, 0], &[0, 3]]).unwrap()).unwrap();
        let h2 = GroupElement::matrix(Matrix::from_i64(&f, &[&[1, 1], &[0, 1]]).unwrap()).unwrap();
        let a = GroupElement::semidirect(5, vec![1, 2], h1).unwrap();
        let b = GroupElement::semidirect(5, vec![4, 0], h2).unwrap();
        // (v1, h1)(v2, h2) = (v1 + h1 v2, h1 h2): h1 * (4,0) = (8,0) = (3,0).
        match a.mul(&b).unwrap() {
            GroupElement::Semidirect { vec, .. } => assert_eq!(vec, vec![4, 2]),
            _ => panic!("product left its family"),
        }
        let ai = a.inverse().unwrap();
        assert!(ai.mul(&a).unwrap().is_identity());
        assert!(a.mul(&ai).unwrap().is_identity());
        // Associativity across all three shapes of parentheses.
        let c = a.mul(&b).unwrap();
        assert_eq!(a.mul(&b.mul(&c).unwrap()).unwrap(), a.mul(&b).unwrap().mul(&c).unwrap());
    }

    #[test]
    fn semidirect_arithmetic_with_permutation_action() {
        let swap = GroupElement::permutation(vec![1, 0, 2]).unwrap();
        let a = GroupElement::semidirect(3, vec![1, 0, 2], swap.clone()).unwrap();
        // h acts by moving coordinate i to position h(i): swap of slots 0,1.
        match a.mul(&a).unwrap() {
            GroupElement::Semidirect { vec, outer, .. } => {
                assert_eq!(vec, vec![1, 1, 1]);
                assert!(outer.is_identity());
            }
            _ => panic!("product left its family"),
        }
        assert!(a.pow(6).unwrap().is_identity());
        assert!(!a.pow(3).unwrap().is_identity());
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let g = GroupElement::permutation(vec![1, 2, 3, 4, 0]).unwrap();
        let mut acc = g.identity_like();
        for e in 0..12u64 {
            assert_eq!(g.pow(e).unwrap(), acc);
            acc = acc.mul(&g).unwrap();
        }
    }

    #[test]
    fn canonical_bytes_roundtrip_through_decode() {
        let f = f5();
        let f9 = Field::new(3, 2).unwrap();
        let samples = vec![
            GroupElement::matrix(Matrix::from_i64(&f, &[&[1, 2], &[3, 4]]).unwrap()).unwrap(),
            GroupElement::projective_matrix(Matrix::from_i64(&f9, &[&[0, 1], &[2, 0]]).unwrap())
                .unwrap(),
            GroupElement::permutation(vec![3, 1, 0, 2]).unwrap(),
            GroupElement::monomial(
                &f9,
                vec![1, 0],
                vec![f9.element_of_order(8).unwrap(), f9.one()],
            )
            .unwrap(),
            GroupElement::semidirect(
                7,
                vec![5, 6],
                GroupElement::matrix(
                    Matrix::from_i64(&Field::new(7, 1).unwrap(), &[&[1, 1], &[0, 1]]).unwrap(),
                )
                .unwrap(),
            )
            .unwrap(),
        ];
        for el in samples {
            let shape = el.shape().expect("concrete shapes are describable");
            let bytes = el.canonical_bytes();
            let back = GroupElement::decode(&shape, &bytes).unwrap();
            assert_eq!(el, back);
            assert_eq!(bytes, back.canonical_bytes());
        }
        // Truncation and trailing garbage are rejected.
        let el = GroupElement::permutation(vec![1, 0]).unwrap();
        let shape = el.shape().unwrap();
        let bytes = el.canonical_bytes();
        assert!(GroupElement::decode(&shape, &bytes[..bytes.len() - 1]).is_err());
        let mut extended = bytes.clone();
        extended.push(0);
        assert!(GroupElement::decode(&shape, &extended).is_err());
    }

    #[test]
    fn invalid_constructions_are_rejected() {
        let f = f5();
        // Non-bijective permutation.
        assert!(GroupElement::permutation(vec![0, 0, 1]).is_err());
        // Zero scalar in a monomial element.
        assert!(GroupElement::monomial(&f, vec![0, 1], vec![f.zero(), f.one()]).is_err());
        // Semidirect vector entry out of range.
        let swap = GroupElement::permutation(vec![1, 0]).unwrap();
        assert!(GroupElement::semidirect(3, vec![3, 0], swap.clone()).is_err());
        // Matrix action over the wrong field.
        let h = GroupElement::matrix(Matrix::from_i64(&f, &[&[1, 0], &[0, 1]]).unwrap()).unwrap();
        assert!(GroupElement::semidirect(3, vec![0, 0], h).is_err());
        // Projective outer parts cannot act on vectors.
        let pm = GroupElement::projective_matrix(
            Matrix::from_i64(&Field::new(3, 1).unwrap(), &[&[1, 0], &[0, 1]]).unwrap(),
        )
        .unwrap();
        assert!(GroupElement::semidirect(3, vec![0, 0], pm).is_err());
    }

    #[test]
    fn display_renders_each_shape() {
        let f = f5();
        let m = GroupElement::matrix(Matrix::from_i64(&f, &[&[1, 2], &[3, 4]]).unwrap()).unwrap();
        assert_eq!(m.to_string(), "[[1,2],[3,4]]");
        let p = GroupElement::permutation(vec![1, 2, 0, 3]).unwrap();
        assert_eq!(p.to_string(), "(0 1 2)");
        let id = GroupElement::permutation(vec![0, 1]).unwrap();
        assert_eq!(id.to_string(), "()");
    }
}
