//! Exact convex hulls in two and three dimensions.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

pub(crate) type Pt = Vec<Rational>;

pub(crate) fn sub(a: &[Rational], b: &[Rational]) -> Pt {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub(crate) fn cross(a: &[Rational], b: &[Rational]) -> Pt {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn cross2(o: &[Rational], a: &[Rational], b: &[Rational]) -> Rational {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Scales a nonzero rational vector to coprime integers with the same direction.
pub(crate) fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|r| (r * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, a| acc.gcd(a));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|a| a / &g).collect()
}

pub(crate) fn to_rational(v: &[BigInt]) -> Pt {
    v.iter()
        .map(|a| Rational::from_integer(a.clone()))
        .collect()
}

/// Dimension of the affine span and a basis of the direction space.
pub(crate) fn affine_span(points: &[Pt]) -> (usize, Vec<Pt>) {
    let Some(origin) = points.first() else {
        return (0, Vec::new());
    };
    let mut basis: Vec<Pt> = Vec::new();
    // reduced rows with their pivot columns
    let mut rows: Vec<(usize, Pt)> = Vec::new();
    for p in &points[1..] {
        let mut v = sub(p, origin);
        for (col, row) in &rows {
            if !v[*col].is_zero() {
                let k = &v[*col] / &row[*col];
                v = v.iter().zip(row).map(|(a, b)| a - &k * b).collect();
            }
        }
        if let Some(col) = v.iter().position(|a| !a.is_zero()) {
            rows.push((col, v));
            basis.push(sub(p, origin));
        }
    }
    (basis.len(), basis)
}

/// Counter-clockwise extreme points of a planar set (monotone chain).
/// Collinear boundary points are dropped. Input must have at least one point.
pub(crate) fn hull_2d(points: &[Pt]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| points[a].cmp(&points[b]));
    idx.dedup_by(|a, b| points[*a] == points[*b]);
    if idx.len() <= 2 {
        return idx;
    }
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2
            && !cross2(
                &points[lower[lower.len() - 2]],
                &points[lower[lower.len() - 1]],
                &points[i],
            )
            .is_positive()
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2
            && !cross2(
                &points[upper[upper.len() - 2]],
                &points[upper[upper.len() - 1]],
                &points[i],
            )
            .is_positive()
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Facet of a full-dimensional 3D hull: outward primitive normal and
/// the ids of every input point on the plane.
#[derive(Debug, Clone)]
pub(crate) struct Facet3 {
    pub normal: Vec<BigInt>,
    pub on_plane: Vec<usize>,
}

/// Incremental hull of a full-dimensional 3D point set. Returns its facets.
pub(crate) fn hull_3d(points: &[Pt]) -> Vec<Facet3> {
    let n = points.len();

    // initial simplex
    let i0 = 0;
    let i1 = (1..n)
        .find(|&i| points[i] != points[i0])
        .expect("full-dimensional input");
    let d1 = sub(&points[i1], &points[i0]);
    let i2 = (1..n)
        .find(|&i| {
            cross(&d1, &sub(&points[i], &points[i0]))
                .iter()
                .any(|a| !a.is_zero())
        })
        .expect("full-dimensional input");
    let nrm = cross(&d1, &sub(&points[i2], &points[i0]));
    let i3 = (1..n)
        .find(|&i| !dot(&nrm, &sub(&points[i], &points[i0])).is_zero())
        .expect("full-dimensional input");

    // interior point of the seed simplex fixes the orientation
    let centroid: Pt = (0..3)
        .map(|k| {
            [i0, i1, i2, i3]
                .iter()
                .fold(Rational::zero(), |acc, &i| acc + &points[i][k])
                / crate::int(4)
        })
        .collect();
    let mut faces: Vec<Option<[usize; 3]>> = Vec::new();
    let orient = |t: [usize; 3]| -> [usize; 3] {
        let nv = cross(
            &sub(&points[t[1]], &points[t[0]]),
            &sub(&points[t[2]], &points[t[0]]),
        );
        if dot(&nv, &sub(&centroid, &points[t[0]])).is_positive() {
            [t[0], t[2], t[1]]
        } else {
            t
        }
    };
    for t in [[i0, i1, i2], [i0, i1, i3], [i0, i2, i3], [i1, i2, i3]] {
        faces.push(Some(orient(t)));
    }
    let normal_of = |t: &[usize; 3]| {
        cross(
            &sub(&points[t[1]], &points[t[0]]),
            &sub(&points[t[2]], &points[t[0]]),
        )
    };

    let seed: HashSet<usize> = [i0, i1, i2, i3].into_iter().collect();
    for p in 0..n {
        if seed.contains(&p) {
            continue;
        }
        let visible: Vec<usize> = faces
            .iter()
            .enumerate()
            .filter_map(|(k, f)| {
                let t = f.as_ref()?;
                dot(&normal_of(t), &sub(&points[p], &points[t[0]]))
                    .is_positive()
                    .then_some(k)
            })
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut vis_edges: HashSet<(usize, usize)> = HashSet::new();
        for &k in &visible {
            let t = faces[k].expect("live face");
            for e in 0..3 {
                vis_edges.insert((t[e], t[(e + 1) % 3]));
            }
        }
        let horizon: Vec<(usize, usize)> = vis_edges
            .iter()
            .filter(|(u, v)| !vis_edges.contains(&(*v, *u)))
            .copied()
            .collect();
        for &k in &visible {
            faces[k] = None;
        }
        for (u, v) in horizon {
            faces.push(Some([u, v, p]));
        }
    }

    // merge coplanar triangles into facets
    let mut planes: BTreeMap<Vec<BigInt>, Rational> = BTreeMap::new();
    for t in faces.iter().flatten() {
        let normal = primitive_integer(&normal_of(t));
        let offset = dot(&to_rational(&normal), &points[t[0]]);
        planes.insert(normal, offset);
    }
    planes
        .into_iter()
        .map(|(normal, offset)| {
            let nr = to_rational(&normal);
            let on_plane = (0..n).filter(|&i| dot(&nr, &points[i]) == offset).collect();
            Facet3 { normal, on_plane }
        })
        .collect()
}

/// Cyclic extreme points of a planar point set lying in a plane of `R^3` with
/// normal `normal`; counter-clockwise when viewed from the side `normal` points to.
pub(crate) fn polygon_in_plane(points: &[Pt], ids: &[usize], normal: &[BigInt]) -> Vec<usize> {
    let drop = (0..3)
        .max_by_key(|&k| normal[k].abs())
        .expect("three coordinates");
    let keep: Vec<usize> = (0..3).filter(|&k| k != drop).collect();
    let projected: Vec<Pt> = ids
        .iter()
        .map(|&i| keep.iter().map(|&k| points[i][k].clone()).collect())
        .collect();
    let mut cyc: Vec<usize> = hull_2d(&projected).into_iter().map(|j| ids[j]).collect();
    if cyc.len() >= 3 {
        let nv = cross(
            &sub(&points[cyc[1]], &points[cyc[0]]),
            &sub(&points[cyc[2]], &points[cyc[0]]),
        );
        if dot(&nv, &to_rational(normal)).is_negative() {
            cyc.reverse();
        }
    }
    cyc
}
