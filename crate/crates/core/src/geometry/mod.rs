//! Lattice polytopes of exponent vectors and the face/weight correspondence.

mod hull;
mod predicates;

pub use predicates::{
    classify_edge, shape_audit_polytope, shape_audit_with_edge, trapezoid_membership, CeilingKind,
    EdgeClass, ShapeCheck, ShapeReport, TrapezoidReport, CHECK_FLOOR_CEILING, CHECK_FLOOR_EDGE,
    CHECK_LATERAL, CHECK_SLANTED, CHECK_VERTICES,
};

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::format_rational;
use crate::{FracPoly, Rational, Var, WeightVector};

use hull::{
    affine_span, dot, hull_2d, hull_3d, polygon_in_plane, primitive_integer, sub, to_rational, Pt,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("empty point set")]
    Empty,
    #[error("points do not all have dimension {0}")]
    DimensionMismatch(usize),
    #[error("unsupported ambient dimension {0}")]
    UnsupportedDimension(usize),
    #[error("weight cone not one-dimensional")]
    WeightCone,
    #[error("zero edge direction")]
    ZeroDirection,
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("zero polynomial has no Newton polygon")]
    ZeroPolynomial,
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint(pub Vec<Rational>);

impl LatticePoint {
    pub fn ints(coords: &[i64]) -> Self {
        LatticePoint(coords.iter().map(|&a| crate::int(a)).collect())
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.0
                .iter()
                .map(|r| Value::String(format_rational(r)))
                .collect(),
        )
    }
}

impl std::fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FaceClass {
    Floor,
    Ceiling,
    Vertical,
    SlantedPlane,
    Other,
}

impl FaceClass {
    pub fn name(self) -> &'static str {
        match self {
            FaceClass::Floor => "floor",
            FaceClass::Ceiling => "ceiling",
            FaceClass::Vertical => "vertical",
            FaceClass::SlantedPlane => "slanted-plane",
            FaceClass::Other => "other",
        }
    }
}

/// A face of a polytope, given by indices into the polytope's vertex list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub dim: usize,
    /// Cyclic order for polygons, sorted otherwise.
    pub vertex_ids: Vec<usize>,
    /// Outward coprime integer normal; codimension-1 faces only.
    pub normal: Option<Vec<BigInt>>,
    pub class: FaceClass,
}

impl Face {
    fn sorted_ids(&self) -> BTreeSet<usize> {
        self.vertex_ids.iter().copied().collect()
    }

    /// Same face up to the order of its vertex ids.
    pub fn same_as(&self, other: &Face) -> bool {
        self.sorted_ids() == other.sorted_ids()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "class": self.class.name(),
            "dim": self.dim,
            "normal": self.normal.as_ref().map(|n| n.iter().map(|a| a.to_string()).collect::<Vec<_>>()),
            "vertex_ids": self.vertex_ids,
        })
    }
}

#[derive(Debug, Clone)]
pub struct LatticePolytope {
    /// Ambient dimension, 2 or 3.
    pub dim: usize,
    /// Dimension of the affine span.
    pub affine_dim: usize,
    pub vertices: Vec<LatticePoint>,
    /// Facets: edges for a polygon, 2-faces for a 3D polytope. A flat 3D polygon
    /// lists itself as its single face.
    pub faces: Vec<Face>,
    /// One-dimensional faces.
    pub edges: Vec<Face>,
    /// Variable carried by each coordinate, when built from a polynomial.
    pub axes: Option<Vec<Var>>,
    pub source: Option<FracPoly>,
}

pub fn convex_hull(points: &[LatticePoint], dim: usize) -> Result<LatticePolytope, GeometryError> {
    if points.is_empty() {
        return Err(GeometryError::Empty);
    }
    if dim != 2 && dim != 3 {
        return Err(GeometryError::UnsupportedDimension(dim));
    }
    if points.iter().any(|p| p.dim() != dim) {
        return Err(GeometryError::DimensionMismatch(dim));
    }
    let mut pts: Vec<Pt> = points.iter().map(|p| p.0.clone()).collect();
    pts.sort();
    pts.dedup();
    let (affine_dim, basis) = affine_span(&pts);

    let mut poly = LatticePolytope {
        dim,
        affine_dim,
        vertices: Vec::new(),
        faces: Vec::new(),
        edges: Vec::new(),
        axes: None,
        source: None,
    };
    match affine_dim {
        0 => poly.vertices = vec![LatticePoint(pts[0].clone())],
        1 => {
            let d = &basis[0];
            let lo = pts
                .iter()
                .min_by(|a, b| dot(a, d).cmp(&dot(b, d)))
                .expect("nonempty");
            let hi = pts
                .iter()
                .max_by(|a, b| dot(a, d).cmp(&dot(b, d)))
                .expect("nonempty");
            let mut ends = vec![lo.clone(), hi.clone()];
            ends.sort();
            poly.vertices = ends.into_iter().map(LatticePoint).collect();
            poly.edges = vec![Face {
                dim: 1,
                vertex_ids: vec![0, 1],
                normal: None,
                class: FaceClass::Other,
            }];
        }
        2 if dim == 2 => {
            let cyc = hull_2d(&pts);
            poly.vertices = cyc.iter().map(|&i| LatticePoint(pts[i].clone())).collect();
            let k = cyc.len();
            for a in 0..k {
                let b = (a + 1) % k;
                let d = sub(&poly.vertices[b].0, &poly.vertices[a].0);
                let normal = primitive_integer(&[d[1].clone(), -d[0].clone()]);
                poly.faces.push(Face {
                    dim: 1,
                    vertex_ids: vec![a, b],
                    normal: Some(normal),
                    class: FaceClass::Other,
                });
            }
            poly.edges = poly.faces.clone();
        }
        2 => {
            let normal = flat_normal(&basis);
            let ids: Vec<usize> = (0..pts.len()).collect();
            let cyc = polygon_in_plane(&pts, &ids, &normal);
            poly.vertices = cyc.iter().map(|&i| LatticePoint(pts[i].clone())).collect();
            let k = cyc.len();
            poly.edges = (0..k)
                .map(|a| Face {
                    dim: 1,
                    vertex_ids: vec![a, (a + 1) % k],
                    normal: None,
                    class: FaceClass::Other,
                })
                .collect();
            poly.faces = vec![Face {
                dim: 2,
                vertex_ids: (0..k).collect(),
                normal: Some(normal.clone()),
                class: classify_plane(&normal),
            }];
        }
        _ => build_3d(&mut poly, &pts),
    }
    Ok(poly)
}

/// Plane normal of a flat set in `R^3`, first nonzero entry positive.
fn flat_normal(basis: &[Pt]) -> Vec<BigInt> {
    let mut n = primitive_integer(&hull::cross(&basis[0], &basis[1]));
    if n.iter()
        .find(|a| !a.is_zero())
        .is_some_and(|a| a.is_negative())
    {
        n = n.into_iter().map(|a| -a).collect();
    }
    n
}

fn classify_plane(normal: &[BigInt]) -> FaceClass {
    let horizontal = normal[0].is_zero() && normal[1].is_zero();
    if horizontal {
        if normal[2].is_negative() {
            FaceClass::Floor
        } else {
            FaceClass::Ceiling
        }
    } else if normal[2].is_zero() {
        FaceClass::Vertical
    } else {
        FaceClass::SlantedPlane
    }
}

fn build_3d(poly: &mut LatticePolytope, pts: &[Pt]) {
    let facets = hull_3d(pts);
    let cycles: Vec<Vec<usize>> = facets
        .iter()
        .map(|f| polygon_in_plane(pts, &f.on_plane, &f.normal))
        .collect();
    let vertex_pts: BTreeSet<usize> = cycles.iter().flatten().copied().collect();
    let mut order: Vec<usize> = vertex_pts.into_iter().collect();
    order.sort_by(|&a, &b| pts[a].cmp(&pts[b]));
    let id_of = |p: usize| order.iter().position(|&q| q == p).expect("vertex id");
    poly.vertices = order
        .iter()
        .map(|&i| LatticePoint(pts[i].clone()))
        .collect();

    let mut edge_set: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (f, cyc) in facets.iter().zip(&cycles) {
        let ids: Vec<usize> = cyc.iter().map(|&p| id_of(p)).collect();
        for k in 0..ids.len() {
            let (a, b) = (ids[k], ids[(k + 1) % ids.len()]);
            edge_set.insert((a.min(b), a.max(b)));
        }
        poly.faces.push(Face {
            dim: 2,
            vertex_ids: ids,
            normal: Some(f.normal.clone()),
            class: classify_plane(&f.normal),
        });
    }
    poly.edges = edge_set
        .into_iter()
        .map(|(a, b)| Face {
            dim: 1,
            vertex_ids: vec![a, b],
            normal: None,
            class: FaceClass::Other,
        })
        .collect();
}

/// Newton polytope of `p` with coordinates given by `axes` (other exponents ignored).
pub fn newton_polytope(p: &FracPoly, axes: &[Var]) -> Result<LatticePolytope, GeometryError> {
    if p.is_zero() {
        return Err(GeometryError::ZeroPolynomial);
    }
    let points: Vec<LatticePoint> = p
        .support()
        .map(|m| LatticePoint(axes.iter().map(|v| m.exp(*v).clone()).collect()))
        .collect();
    let mut poly = convex_hull(&points, axes.len())?;
    poly.axes = Some(axes.to_vec());
    poly.source = Some(p.clone());
    Ok(poly)
}

/// `N(f)` with points `(deg_x, deg_y)`.
pub fn newton_polygon(p: &FracPoly) -> Result<LatticePolytope, GeometryError> {
    newton_polytope(p, &[Var::X, Var::Y])
}

/// `N(P)` with points `(deg_F, deg_G, deg_x)`.
pub fn dependence_polytope(p: &FracPoly) -> Result<LatticePolytope, GeometryError> {
    newton_polytope(p, &[Var::F, Var::G, Var::X])
}

impl LatticePolytope {
    fn axes_or_default(&self) -> Vec<Var> {
        self.axes.clone().unwrap_or_else(|| {
            if self.dim == 2 {
                vec![Var::X, Var::Y]
            } else {
                vec![Var::F, Var::G, Var::X]
            }
        })
    }

    pub fn vertex(&self, id: usize) -> &LatticePoint {
        &self.vertices[id]
    }

    pub fn face_points(&self, face: &Face) -> Vec<&LatticePoint> {
        face.vertex_ids.iter().map(|&i| &self.vertices[i]).collect()
    }

    /// Maximum of `<d, v>` over the polytope.
    pub fn support_value(&self, direction: &[Rational]) -> Rational {
        self.vertices
            .iter()
            .map(|v| dot(direction, &v.0))
            .max()
            .expect("polytope has a vertex")
    }

    /// Face of points maximizing the inner product with `direction`.
    pub fn face_for_direction(&self, direction: &[Rational]) -> Face {
        let top = self.support_value(direction);
        let ids: Vec<usize> = (0..self.vertices.len())
            .filter(|&i| dot(direction, &self.vertices[i].0) == top)
            .collect();
        let as_set: BTreeSet<usize> = ids.iter().copied().collect();
        if let Some(f) = self
            .faces
            .iter()
            .chain(&self.edges)
            .find(|f| f.sorted_ids() == as_set)
        {
            return f.clone();
        }
        let pts: Vec<Pt> = ids.iter().map(|&i| self.vertices[i].0.clone()).collect();
        let dim = affine_span(&pts).0;
        Face {
            dim,
            vertex_ids: ids,
            normal: None,
            class: FaceClass::Other,
        }
    }

    /// The face on which `w` attains its maximum.
    pub fn face_for_weight(&self, w: &WeightVector) -> Face {
        let direction: Vec<Rational> = self
            .axes_or_default()
            .iter()
            .map(|v| w.get(*v).clone())
            .collect();
        self.face_for_direction(&direction)
    }

    /// Coprime integer outward normal of a codimension-1 face, as a weight vector.
    pub fn weight_for_face(&self, face: &Face) -> Result<WeightVector, GeometryError> {
        if self.affine_dim != self.dim || face.dim + 1 != self.dim {
            return Err(GeometryError::WeightCone);
        }
        let normal = face.normal.as_ref().ok_or(GeometryError::WeightCone)?;
        let entries: Vec<(Var, Rational)> = self
            .axes_or_default()
            .into_iter()
            .zip(normal)
            .map(|(v, a)| (v, Rational::from_integer(a.clone())))
            .collect();
        Ok(WeightVector::new(&entries))
    }

    /// Whether a point satisfies every facet inequality (full-dimensional hulls),
    /// or lies in the span and hull otherwise.
    pub fn contains(&self, point: &LatticePoint) -> bool {
        if self.affine_dim == self.dim {
            return self.faces.iter().all(|f| {
                let n = to_rational(f.normal.as_ref().expect("facet normal"));
                let v = &self.vertices[f.vertex_ids[0]].0;
                dot(&n, &point.0) <= dot(&n, v)
            });
        }
        let mut pts: Vec<Pt> = self.vertices.iter().map(|v| v.0.clone()).collect();
        pts.push(point.0.clone());
        let (d, _) = affine_span(&pts);
        if d != self.affine_dim {
            return false;
        }
        match self.affine_dim {
            0 => point == &self.vertices[0],
            1 => {
                let (a, b) = (&self.vertices[0].0, &self.vertices[1].0);
                let t = dot(&sub(&point.0, a), &sub(b, a));
                !t.is_negative() && t <= dot(&sub(b, a), &sub(b, a))
            }
            _ => {
                let normal = self.faces[0].normal.clone().expect("flat polygon normal");
                let ids: Vec<usize> = (0..pts.len()).collect();
                let cyc = polygon_in_plane(&pts, &ids, &normal);
                // boundary and interior points are never extreme
                !cyc.contains(&(pts.len() - 1))
            }
        }
    }

    /// The four coordinates of `N(P)` points in the `(F, G, x)` convention.
    pub fn to_json(&self) -> Value {
        json!({
            "affine_dim": self.affine_dim,
            "dim": self.dim,
            "edges": self.edges.iter().map(|e| e.vertex_ids.clone()).collect::<Vec<_>>(),
            "faces": self.faces.iter().map(Face::to_json).collect::<Vec<_>>(),
            "vertices": self.vertices.iter().map(LatticePoint::to_json).collect::<Vec<_>>(),
        })
    }
}
