use std::f64::consts::{PI, TAU};

use crate::angular::Direction;

/// Ordered set of sphere points; the column order of the δ-peak programs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SphereGrid {
    points: Vec<Direction>,
}

impl SphereGrid {
    pub fn new(points: Vec<Direction>) -> Self {
        Self { points }
    }

    pub fn points(&self) -> &[Direction] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Appends the points of `other` after the existing ones, so indices into
    /// `self` stay valid.
    pub fn extend(&mut self, other: &SphereGrid) {
        self.points.extend_from_slice(&other.points);
    }

    /// Union of Fibonacci grids of the given sizes, in order.
    pub fn nested(sizes: &[usize]) -> Self {
        let mut g = SphereGrid::default();
        for &n in sizes {
            g.extend(&fibonacci_grid(n));
        }
        g
    }

    /// The grid together with every mirror image `(θ, −φ)` not already in it.
    pub fn mirror_closed(&self) -> Self {
        let mut points = self.points.clone();
        for p in &self.points {
            let m = p.mirrored();
            if !points.iter().any(|q| q.dot(&m) > 1.0 - 1e-13) {
                points.push(m);
            }
        }
        Self { points }
    }

    pub fn is_mirror_closed(&self) -> bool {
        self.points
            .iter()
            .all(|p| self.points.iter().any(|q| q.dot(&p.mirrored()) > 1.0 - 1e-13))
    }
}

/// Golden-angle spiral with `n` points of equal area: `z_i = 1 − (2i+1)/n`,
/// `φ_i = i·(3 − √5)π`. A single point sits at the north pole.
pub fn fibonacci_grid(n: usize) -> SphereGrid {
    if n == 1 {
        return SphereGrid::new(vec![Direction::NORTH]);
    }
    let golden = PI * (3.0 - 5f64.sqrt());
    let points = (0..n)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / n as f64;
            Direction::new(z.acos(), (i as f64 * golden) % TAU)
        })
        .collect();
    SphereGrid::new(points)
}

/// `count` points on a cone of half-angle `radius` around `center`.
pub fn ring(center: Direction, radius: f64, count: usize) -> SphereGrid {
    let n = center.unit_vector();
    // orthonormal frame (e1, e2) perpendicular to n
    let helper = if n[2].abs() < 0.9 { [0.0, 0.0, 1.0] } else { [1.0, 0.0, 0.0] };
    let e1 = normalize(cross(helper, n));
    let e2 = cross(n, e1);
    let (s, c) = radius.sin_cos();
    let points = (0..count)
        .map(|k| {
            let (sp, cp) = (TAU * k as f64 / count as f64).sin_cos();
            Direction::from_vector(std::array::from_fn(|a| c * n[a] + s * (cp * e1[a] + sp * e2[a])))
        })
        .collect();
    SphereGrid::new(points)
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.map(|x| x / n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_points_are_unit_and_balanced() {
        for n in [1, 2, 7, 100, 1000] {
            let g = fibonacci_grid(n);
            assert_eq!(g.len(), n);
            let mut c = [0.0; 3];
            for p in g.points() {
                let v = p.unit_vector();
                assert!((v.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
                for a in 0..3 {
                    c[a] += v[a] / n as f64;
                }
            }
            if n >= 100 {
                assert!(c.iter().all(|x| x.abs() < 2e-2), "{c:?}");
            }
        }
    }

    #[test]
    fn nested_union_keeps_prefix() {
        let g = SphereGrid::nested(&[10, 20]);
        assert_eq!(g.len(), 30);
        assert_eq!(&g.points()[..10], fibonacci_grid(10).points());
    }

    #[test]
    fn mirror_closure() {
        let g = fibonacci_grid(50);
        assert!(!g.is_mirror_closed());
        let m = g.mirror_closed();
        assert!(m.is_mirror_closed());
        // points with φ = 0 are their own mirror image
        assert!(m.len() < 100);
        assert_eq!(&m.points()[..50], g.points());
    }

    #[test]
    fn ring_points_sit_at_the_radius() {
        for center in [Direction::NORTH, Direction::new(1.0, 2.0), Direction::SOUTH] {
            for p in ring(center, 0.1, 6).points() {
                assert!((p.dot(&center) - 0.1f64.cos()).abs() < 1e-12);
            }
        }
    }
}
