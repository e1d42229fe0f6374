//! Shape predicates on Newton polygons and on the dependence polytope.

use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use super::hull::{cross, sub};
use super::{newton_polygon, FaceClass, GeometryError, LatticePoint, LatticePolytope};
use crate::{FracPoly, Rational, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeClass {
    ParallelFOG,
    ParallelFOx,
    ParallelGOx,
    Slanted,
}

impl EdgeClass {
    pub fn name(self) -> &'static str {
        match self {
            EdgeClass::ParallelFOG => "parallel-FOG",
            EdgeClass::ParallelFOx => "parallel-FOx",
            EdgeClass::ParallelGOx => "parallel-GOx",
            EdgeClass::Slanted => "slanted",
        }
    }
}

/// Classifies an edge direction given in `(F, G, x)` coordinates.
pub fn classify_edge(direction: &[Rational]) -> Result<EdgeClass, GeometryError> {
    if direction.len() != 3 {
        return Err(GeometryError::DimensionMismatch(3));
    }
    if direction.iter().all(Zero::is_zero) {
        return Err(GeometryError::ZeroDirection);
    }
    Ok(if direction[2].is_zero() {
        EdgeClass::ParallelFOG
    } else if direction[1].is_zero() {
        EdgeClass::ParallelFOx
    } else if direction[0].is_zero() {
        EdgeClass::ParallelGOx
    } else {
        EdgeClass::Slanted
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrapezoidReport {
    /// The leading vertex `(m, n)`.
    pub leading_vertex: (i64, i64),
    pub violations: Vec<String>,
    /// A hull edge parallel to `(1, 1)`, if any.
    pub bisectrix_edge: Option<(LatticePoint, LatticePoint)>,
}

impl TrapezoidReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "bisectrix_edge": self.bisectrix_edge.as_ref().map(|(a, b)| vec![a.to_string(), b.to_string()]),
            "m": self.leading_vertex.0,
            "n": self.leading_vertex.1,
            "pass": self.passes(),
            "violations": self.violations,
        })
    }
}

fn small_int(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

/// Checks that `N(f)` lies in the trapezoid with apex `(m, n)`, `n > m > 0`,
/// bounded by the axes, the line `i = m` and the line `j - i = n - m`.
pub fn trapezoid_membership(f: &FracPoly) -> Result<TrapezoidReport, GeometryError> {
    if f.is_zero() {
        return Err(GeometryError::ZeroPolynomial);
    }
    let mut points = Vec::new();
    for m in f.support() {
        if m.exp(Var::F) != &Rational::zero() || m.exp(Var::G) != &Rational::zero() {
            return Err(GeometryError::Invalid(
                "polynomial must be in x and y only".into(),
            ));
        }
        let (Some(i), Some(j)) = (small_int(m.exp(Var::X)), small_int(m.exp(Var::Y))) else {
            return Err(GeometryError::Invalid("integer exponents required".into()));
        };
        points.push((i, j));
    }
    let (m, n) = *points
        .iter()
        .max_by_key(|(i, j)| (*j, *i))
        .expect("nonzero");
    let mut violations = Vec::new();
    if m == 0 {
        violations.push("m = 0".to_string());
    } else if m < 0 {
        violations.push(format!("m = {m} < 0"));
    }
    if n <= m {
        violations.push("n > m violated".to_string());
    }
    for &(i, j) in &points {
        if i < 0 || i > m || j < 0 || j - i > n - m {
            violations.push(format!("support point ({i},{j}) outside trapezoid"));
        }
    }

    let hull = newton_polygon(f)?;
    let bisectrix_edge = hull.edges.iter().find_map(|e| {
        let a = &hull.vertices[e.vertex_ids[0]];
        let b = &hull.vertices[e.vertex_ids[1]];
        let d = sub(&b.0, &a.0);
        (d[0] == d[1]).then(|| (a.clone(), b.clone()))
    });
    Ok(TrapezoidReport {
        leading_vertex: (m, n),
        violations,
        bisectrix_edge,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeCheck {
    pub name: &'static str,
    pub pass: bool,
    pub witness: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CeilingKind {
    Vertex,
    Segment,
    Triangle,
    Polygon(usize),
}

impl CeilingKind {
    pub fn name(self) -> String {
        match self {
            CeilingKind::Vertex => "vertex".into(),
            CeilingKind::Segment => "segment".into(),
            CeilingKind::Triangle => "triangle".into(),
            CeilingKind::Polygon(k) => format!("{k}-gon"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeReport {
    pub checks: Vec<ShapeCheck>,
    pub ceiling: CeilingKind,
    /// The edge joining `(deg_F, 0, 0)` and `(0, deg_G, 0)`.
    pub edge: (LatticePoint, LatticePoint),
}

impl ShapeReport {
    pub fn passes(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&ShapeCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ceiling": self.ceiling.name(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "status": if c.pass { "pass" } else { "fail" },
                "witness": c.witness,
            })).collect::<Vec<_>>(),
            "edge": [self.edge.0.to_string(), self.edge.1.to_string()],
            "pass": self.passes(),
        })
    }
}

pub const CHECK_VERTICES: &str = "vertices_in_coordinate_planes";
pub const CHECK_FLOOR_CEILING: &str = "floor_and_ceiling";
pub const CHECK_SLANTED: &str = "no_slanted_edges";
pub const CHECK_LATERAL: &str = "lateral_faces_parallel_to_edge";
pub const CHECK_FLOOR_EDGE: &str = "floor_contains_edge";

/// Full shape audit of `N(P)` in `(F, G, x)` coordinates, with the edge taken
/// from the extreme vertices on the `F` and `G` axes.
pub fn shape_audit_polytope(poly: &LatticePolytope) -> Result<ShapeReport, GeometryError> {
    if poly.dim != 3 || poly.affine_dim != 3 {
        return Err(GeometryError::Degenerate(format!(
            "shape audit needs a 3-dimensional polytope, affine span has dimension {}",
            poly.affine_dim
        )));
    }
    let zero = Rational::zero();
    let max_f = poly
        .vertices
        .iter()
        .map(|v| v.0[0].clone())
        .max()
        .expect("vertex");
    let max_g = poly
        .vertices
        .iter()
        .map(|v| v.0[1].clone())
        .max()
        .expect("vertex");
    let edge = (
        LatticePoint(vec![max_f, zero.clone(), zero.clone()]),
        LatticePoint(vec![zero.clone(), max_g, zero]),
    );
    shape_audit_with_edge(poly, edge)
}

/// Shape audit against an explicitly given edge `E`.
pub fn shape_audit_with_edge(
    poly: &LatticePolytope,
    edge: (LatticePoint, LatticePoint),
) -> Result<ShapeReport, GeometryError> {
    if poly.dim != 3 || poly.affine_dim != 3 {
        return Err(GeometryError::Degenerate(format!(
            "shape audit needs a 3-dimensional polytope, affine span has dimension {}",
            poly.affine_dim
        )));
    }
    let mut checks = Vec::new();

    // (a)
    let off_planes: Vec<String> = poly
        .vertices
        .iter()
        .filter(|v| !v.0[0].is_zero() && !v.0[1].is_zero())
        .map(|v| v.to_string())
        .collect();
    checks.push(ShapeCheck {
        name: CHECK_VERTICES,
        pass: off_planes.is_empty(),
        witness: off_planes,
    });

    // (b)
    let down = poly.face_for_direction(&[Rational::zero(), Rational::zero(), crate::int(-1)]);
    let up = poly.face_for_direction(&[Rational::zero(), Rational::zero(), crate::int(1)]);
    let floors: Vec<_> = poly
        .faces
        .iter()
        .filter(|f| f.class == FaceClass::Floor)
        .collect();
    let mut witness = Vec::new();
    let floor_height = &poly.vertices[down.vertex_ids[0]].0[2];
    if floors.len() != 1 || down.dim != 2 {
        witness.push(format!("bottom face has dimension {}", down.dim));
    }
    if !floor_height.is_zero() {
        witness.push(format!("floor at x = {floor_height}"));
    }
    let ceiling = match up.dim {
        0 => CeilingKind::Vertex,
        1 => CeilingKind::Segment,
        _ if up.vertex_ids.len() == 3 => CeilingKind::Triangle,
        _ => CeilingKind::Polygon(up.vertex_ids.len()),
    };
    if let CeilingKind::Polygon(k) = ceiling {
        witness.push(format!("ceiling is a {k}-gon"));
    }
    checks.push(ShapeCheck {
        name: CHECK_FLOOR_CEILING,
        pass: witness.is_empty(),
        witness,
    });

    // (c)
    let mut slanted = Vec::new();
    for e in &poly.edges {
        let a = &poly.vertices[e.vertex_ids[0]];
        let b = &poly.vertices[e.vertex_ids[1]];
        if classify_edge(&sub(&b.0, &a.0))? == EdgeClass::Slanted {
            slanted.push(format!("{a}-{b}"));
        }
    }
    checks.push(ShapeCheck {
        name: CHECK_SLANTED,
        pass: slanted.is_empty(),
        witness: slanted,
    });

    // (d)
    let e_dir = sub(&edge.1 .0, &edge.0 .0);
    let parallel = |d: &[Rational]| cross(d, &e_dir).iter().all(Zero::is_zero);
    let mut bad_faces = Vec::new();
    for f in poly
        .faces
        .iter()
        .filter(|f| f.class == FaceClass::SlantedPlane)
    {
        let pts = poly.face_points(f);
        let k = pts.len();
        let sides: Vec<Vec<Rational>> = (0..k)
            .map(|a| sub(&pts[(a + 1) % k].0, &pts[a].0))
            .collect();
        let along: Vec<usize> = (0..k).filter(|&a| parallel(&sides[a])).collect();
        let ok = match k {
            3 => along.len() == 1,
            4 => along.len() == 2 && along[1] == along[0] + 2,
            _ => false,
        };
        if !ok {
            let names: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
            bad_faces.push(names.join(" "));
        }
    }
    checks.push(ShapeCheck {
        name: CHECK_LATERAL,
        pass: bad_faces.is_empty(),
        witness: bad_faces,
    });

    // (e)
    let mut witness = Vec::new();
    let floor_pts = poly.face_points(&down);
    for end in [&edge.0, &edge.1] {
        if !floor_pts.contains(&end) {
            witness.push(format!("{end} is not a floor vertex"));
        }
    }
    let is_edge = poly.edges.iter().any(|e| {
        let a = &poly.vertices[e.vertex_ids[0]];
        let b = &poly.vertices[e.vertex_ids[1]];
        (a == &edge.0 && b == &edge.1) || (a == &edge.1 && b == &edge.0)
    });
    if witness.is_empty() && !is_edge {
        witness.push(format!("{}-{} is not an edge", edge.0, edge.1));
    }
    checks.push(ShapeCheck {
        name: CHECK_FLOOR_EDGE,
        pass: witness.is_empty(),
        witness,
    });

    Ok(ShapeReport {
        checks,
        ceiling,
        edge,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse_poly;
    use crate::geometry::convex_hull;
    use crate::int;

    fn d(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&a| int(a)).collect()
    }

    #[test]
    fn edge_classes() {
        assert_eq!(
            classify_edge(&d(&[-1, 1, 0])).unwrap(),
            EdgeClass::ParallelFOG
        );
        assert_eq!(classify_edge(&d(&[1, 1, 1])).unwrap(), EdgeClass::Slanted);
        assert_eq!(
            classify_edge(&d(&[-1, 0, 1])).unwrap(),
            EdgeClass::ParallelFOx
        );
        assert_eq!(
            classify_edge(&d(&[0, 2, 1])).unwrap(),
            EdgeClass::ParallelGOx
        );
        assert_eq!(
            classify_edge(&d(&[0, 0, 0])),
            Err(GeometryError::ZeroDirection)
        );
    }

    #[test]
    fn trapezoid_examples() {
        let r = trapezoid_membership(&parse_poly("x^2*y^3 + x*y + 1").unwrap()).unwrap();
        assert!(r.passes());
        assert_eq!(r.leading_vertex, (2, 3));

        let r = trapezoid_membership(&parse_poly("x + y^2").unwrap()).unwrap();
        assert!(r.violations.contains(&"m = 0".to_string()));

        let r = trapezoid_membership(&parse_poly("x^2*y^3 + y").unwrap()).unwrap();
        let (a, b) = r.bisectrix_edge.unwrap();
        assert_eq!(
            (a, b),
            (LatticePoint::ints(&[0, 1]), LatticePoint::ints(&[2, 3]))
        );
    }

    fn tetra(extra: Option<&[i64]>) -> LatticePolytope {
        let mut pts = vec![
            LatticePoint::ints(&[0, 0, 0]),
            LatticePoint::ints(&[3, 0, 0]),
            LatticePoint::ints(&[0, 2, 0]),
            LatticePoint::ints(&[0, 0, 1]),
        ];
        if let Some(e) = extra {
            pts.push(LatticePoint::ints(e));
        }
        convex_hull(&pts, 3).unwrap()
    }

    #[test]
    fn tetrahedron_passes() {
        let r = shape_audit_polytope(&tetra(None)).unwrap();
        assert!(r.passes(), "{r:?}");
        assert_eq!(r.ceiling, CeilingKind::Vertex);
    }

    #[test]
    fn off_plane_vertex_fails() {
        let r = shape_audit_polytope(&tetra(Some(&[2, 2, 1]))).unwrap();
        let a = r.check(CHECK_VERTICES).unwrap();
        assert!(!a.pass);
        assert_eq!(a.witness, vec!["(2,2,1)".to_string()]);
        let c = r.check(CHECK_SLANTED).unwrap();
        assert!(!c.pass);
        assert!(c.witness.iter().any(|w| w.contains("(2,2,1)")));
    }

    #[test]
    fn flat_input_is_degenerate() {
        let flat = convex_hull(
            &[
                LatticePoint::ints(&[0, 0, 0]),
                LatticePoint::ints(&[3, 0, 0]),
                LatticePoint::ints(&[0, 2, 0]),
            ],
            3,
        )
        .unwrap();
        assert!(matches!(
            shape_audit_polytope(&flat),
            Err(GeometryError::Degenerate(_))
        ));
    }
}
