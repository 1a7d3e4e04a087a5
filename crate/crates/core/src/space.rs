//! Discretized metric measure spaces `(M, d, μ)`.
//!
//! A [`MetricMeasureGrid`] is a finite point set with a symmetric distance
//! and one positive quadrature weight per point; the weights play the role of
//! the measure `μ` (cell-weight quadrature). Uniform lattices remember their
//! structure so that translation-invariant operators can use fast
//! convolution; imported point clouds carry an explicit distance matrix.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::ops::{Deref, DerefMut};
use std::path::Path;

use crate::error::{invalid, Error, Result};

/// Uniform lattice metadata: `points_per_axis` points on `[-radius, radius]`
/// along each of `dim` axes. Points are stored row-major, last axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub dim: usize,
    pub points_per_axis: usize,
    pub radius: f64,
    pub spacing: f64,
}

impl Lattice {
    pub fn shape(&self) -> Vec<usize> {
        vec![self.points_per_axis; self.dim]
    }

    /// Multi-index of a flat point index.
    pub fn multi_index(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim];
        for a in (0..self.dim).rev() {
            out[a] = idx % self.points_per_axis;
            idx /= self.points_per_axis;
        }
        out
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi
            .iter()
            .fold(0, |acc, &m| acc * self.points_per_axis + m)
    }
}

#[derive(Debug, Clone)]
enum Geometry {
    /// Coordinates stored flat, `dim` values per point; distance is Euclidean.
    Euclidean { dim: usize, coords: Vec<f64> },
    /// Dense row-major distance matrix.
    Matrix { n: usize, dist: Vec<f64> },
}

#[derive(Debug, Clone)]
pub struct MetricMeasureGrid {
    geometry: Geometry,
    weights: Vec<f64>,
    alpha_hint: f64,
    x0: usize,
    lattice: Option<Lattice>,
}

/// Ball-volume regularity constants sampled over `(center, radius)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport {
    pub alpha: f64,
    pub c_lower: f64,
    pub c_upper: f64,
    pub regular: bool,
}

impl RegularityReport {
    pub fn ratio(&self) -> f64 {
        self.c_upper / self.c_lower
    }
}

/// Suggested truncation radius for a kernel with walk dimension `beta`
/// observed up to time `t_max`.
pub fn default_truncation_radius(t_max: f64, beta: f64) -> f64 {
    12.0 * t_max.powf(1.0 / beta)
}

/// Uniform lattice on `[-radius, radius]^dim` with cell-volume weights.
pub fn build_lattice_space(
    dim: usize,
    radius: f64,
    points_per_axis: usize,
) -> Result<MetricMeasureGrid> {
    if !(1..=3).contains(&dim) {
        return invalid(format!("lattice dimension must be 1..=3, got {dim}"));
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return invalid(format!("lattice radius must be positive, got {radius}"));
    }
    if points_per_axis < 3 || points_per_axis % 2 == 0 {
        return invalid(format!(
            "points_per_axis must be odd and >= 3, got {points_per_axis}"
        ));
    }
    let n = points_per_axis;
    let spacing = 2.0 * radius / (n - 1) as f64;
    let total = n.pow(dim as u32);
    let lattice = Lattice {
        dim,
        points_per_axis: n,
        radius,
        spacing,
    };
    let mut coords = Vec::with_capacity(total * dim);
    for idx in 0..total {
        for m in lattice.multi_index(idx) {
            coords.push(-radius + m as f64 * spacing);
        }
    }
    let origin = lattice.flat_index(&vec![n / 2; dim]);
    Ok(MetricMeasureGrid {
        geometry: Geometry::Euclidean { dim, coords },
        weights: vec![spacing.powi(dim as i32); total],
        alpha_hint: dim as f64,
        x0: origin,
        lattice: Some(lattice),
    })
}

impl MetricMeasureGrid {
    /// Point cloud in `dim`-dimensional Euclidean space.
    pub fn from_points(dim: usize, coords: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if dim == 0 || coords.len() != dim * weights.len() {
            return invalid("coordinate array does not match dim * point count");
        }
        check_weights(&weights)?;
        if coords.iter().any(|c| !c.is_finite()) {
            return invalid("non-finite coordinate");
        }
        let x0 = nearest_to_origin(dim, &coords);
        Ok(Self {
            geometry: Geometry::Euclidean { dim, coords },
            weights,
            alpha_hint: dim as f64,
            x0,
            lattice: None,
        })
    }

    /// Abstract point cloud given by a dense row-major distance matrix.
    pub fn from_distance_matrix(dist: Vec<f64>, weights: Vec<f64>, alpha_hint: f64) -> Result<Self> {
        let n = weights.len();
        if dist.len() != n * n {
            return Err(Error::SizeMismatch {
                expected: n * n,
                got: dist.len(),
            });
        }
        check_weights(&weights)?;
        for i in 0..n {
            if dist[i * n + i] != 0.0 {
                return invalid(format!("dist({i},{i}) must be 0"));
            }
            for j in 0..i {
                let (a, b) = (dist[i * n + j], dist[j * n + i]);
                if !(a >= 0.0) || a != b {
                    return invalid(format!("distance matrix not symmetric/nonnegative at ({i},{j})"));
                }
            }
        }
        Ok(Self {
            geometry: Geometry::Matrix { n, dist },
            weights,
            alpha_hint,
            x0: 0,
            lattice: None,
        })
    }

    pub fn with_x0(mut self, x0: usize) -> Result<Self> {
        self.check_index(x0)?;
        self.x0 = x0;
        Ok(self)
    }

    pub fn with_alpha_hint(mut self, alpha: f64) -> Self {
        self.alpha_hint = alpha;
        self
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn alpha_hint(&self) -> f64 {
        self.alpha_hint
    }

    /// Reference point (the "origin" of weighted bounds).
    pub fn x0(&self) -> usize {
        self.x0
    }

    pub fn lattice(&self) -> Option<&Lattice> {
        self.lattice.as_ref()
    }

    pub fn dim(&self) -> Option<usize> {
        match &self.geometry {
            Geometry::Euclidean { dim, .. } => Some(*dim),
            Geometry::Matrix { .. } => None,
        }
    }

    pub fn coords(&self, i: usize) -> Option<&[f64]> {
        match &self.geometry {
            Geometry::Euclidean { dim, coords } => Some(&coords[i * dim..(i + 1) * dim]),
            Geometry::Matrix { .. } => None,
        }
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        match &self.geometry {
            Geometry::Euclidean { dim, coords } => {
                let a = &coords[i * dim..(i + 1) * dim];
                let b = &coords[j * dim..(j + 1) * dim];
                a.iter()
                    .zip(b)
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt()
            }
            Geometry::Matrix { n, dist } => dist[i * n + j],
        }
    }

    /// Distance from the reference point.
    pub fn dist_x0(&self, i: usize) -> f64 {
        self.dist(i, self.x0)
    }

    /// Smallest nonzero distance from point 0 to any other point; for a
    /// lattice this is the spacing.
    pub fn min_spacing(&self) -> f64 {
        if let Some(l) = &self.lattice {
            return l.spacing;
        }
        let n = self.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            for j in 0..n {
                let d = self.dist(i, j);
                if d > 0.0 && d < best {
                    best = d;
                }
            }
        }
        best
    }

    /// Distance to the edge of the truncated lattice (sup-norm). `None` for
    /// point clouds, which carry no boundary information.
    pub fn boundary_distance(&self, i: usize) -> Option<f64> {
        let l = self.lattice.as_ref()?;
        let c = self.coords(i)?;
        Some(l.radius - c.iter().fold(0.0_f64, |m, v| m.max(v.abs())))
    }

    /// Points at least `margin` away from the lattice edge (all points for
    /// point clouds).
    pub fn interior_points(&self, margin: f64) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.boundary_distance(i).map_or(true, |b| b >= margin - 1e-12))
            .collect()
    }

    /// Index of the point closest to the given coordinates.
    pub fn nearest_point(&self, x: &[f64]) -> Option<usize> {
        let dim = self.dim()?;
        if x.len() != dim {
            return None;
        }
        (0..self.len()).min_by(|&a, &b| {
            let da: f64 = self.coords(a).unwrap().iter().zip(x).map(|(p, q)| (p - q).powi(2)).sum();
            let db: f64 = self.coords(b).unwrap().iter().zip(x).map(|(p, q)| (p - q).powi(2)).sum();
            da.total_cmp(&db)
        })
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return invalid(format!("point index {i} out of range (n = {})", self.len()));
        }
        Ok(())
    }

    /// Checks the metric axioms on the given triples; returns the largest
    /// triangle-inequality violation (0 when all hold).
    pub fn metric_violation(&self, triples: &[(usize, usize, usize)]) -> f64 {
        let mut worst = 0.0_f64;
        for &(i, j, k) in triples {
            let dij = self.dist(i, j);
            let dji = self.dist(j, i);
            worst = worst.max((dij - dji).abs());
            worst = worst.max(self.dist(i, i));
            if dij < 0.0 {
                worst = worst.max(-dij);
            }
            let excess = dij - (self.dist(i, k) + self.dist(k, j));
            worst = worst.max(excess);
        }
        worst
    }

    /// Writes `id, x1[, x2[, x3]], weight`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let dim = self
            .dim()
            .ok_or_else(|| Error::InvalidInput("point clouds without coordinates cannot be exported as grid CSV".into()))?;
        let mut w = BufWriter::new(File::create(path)?);
        let mut header = vec!["id".to_string()];
        header.extend((1..=dim).map(|a| format!("x{a}")));
        header.push("weight".into());
        writeln!(w, "{}", header.join(","))?;
        for i in 0..self.len() {
            let mut row = vec![i.to_string()];
            row.extend(self.coords(i).unwrap().iter().map(|c| format!("{c:e}")));
            row.push(format!("{:e}", self.weights[i]));
            writeln!(w, "{}", row.join(","))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a grid CSV written by [`write_csv`](Self::write_csv); distances
    /// are recomputed as Euclidean.
    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
        let headers = rdr.headers()?.clone();
        let cols: Vec<&str> = headers.iter().collect();
        if cols.len() < 3 || cols[0] != "id" || cols[cols.len() - 1] != "weight" {
            return Err(Error::Parse("grid CSV header must be id,x1[,x2[,x3]],weight".into()));
        }
        let dim = cols.len() - 2;
        if dim > 3 {
            return Err(Error::Parse(format!("grid CSV has {dim} coordinate columns (max 3)")));
        }
        let mut coords = Vec::new();
        let mut weights = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            for a in 0..dim {
                coords.push(parse_f64(&rec[a + 1])?);
            }
            weights.push(parse_f64(&rec[dim + 1])?);
        }
        Self::from_points(dim, coords, weights)
    }

    /// Point cloud from a weights CSV (`id, weight`, or a full grid CSV) and a
    /// dense distance-matrix CSV (row-major, no header).
    pub fn read_point_cloud(weights_path: &Path, dist_path: &Path, alpha_hint: f64) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(weights_path)?;
        let mut weights = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let last = rec.len().checked_sub(1).ok_or_else(|| Error::Parse("empty row".into()))?;
            weights.push(parse_f64(&rec[last])?);
        }
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_path(dist_path)?;
        let mut dist = Vec::with_capacity(weights.len() * weights.len());
        for rec in rdr.records() {
            for field in rec?.iter() {
                dist.push(parse_f64(field)?);
            }
        }
        Self::from_distance_matrix(dist, weights, alpha_hint)
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|e| Error::Parse(format!("bad number {s:?}: {e}")))
}

fn check_weights(weights: &[f64]) -> Result<()> {
    if weights.is_empty() {
        return invalid("space must contain at least one point");
    }
    if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
        return invalid(format!("weights must be positive and finite, got {w}"));
    }
    Ok(())
}

fn nearest_to_origin(dim: usize, coords: &[f64]) -> usize {
    coords
        .chunks(dim)
        .enumerate()
        .min_by(|a, b| {
            let na: f64 = a.1.iter().map(|v| v * v).sum();
            let nb: f64 = b.1.iter().map(|v| v * v).sum();
            na.total_cmp(&nb)
        })
        .map(|(i, _)| i)
        .unwrap_or(0)
}

/// `μ(B(center, r))`: total weight of points within distance `r` (closed ball).
pub fn ball_measure(space: &MetricMeasureGrid, center: usize, r: f64) -> Result<f64> {
    space.check_index(center)?;
    if !(r > 0.0) {
        return invalid(format!("ball radius must be positive, got {r}"));
    }
    Ok((0..space.len())
        .filter(|&j| space.dist(center, j) <= r * (1.0 + 1e-12))
        .map(|j| space.weight(j))
        .sum())
}

/// Samples `μ(B(x, r)) / r^α` and reports its range.
pub fn check_alpha_regularity(
    space: &MetricMeasureGrid,
    alpha: f64,
    radii: &[f64],
    centers: &[usize],
) -> Result<RegularityReport> {
    if radii.is_empty() {
        return invalid("radii list is empty");
    }
    if centers.is_empty() {
        return invalid("centers list is empty");
    }
    if !(alpha > 0.0) {
        return invalid("alpha must be positive");
    }
    let mut lo = f64::INFINITY;
    let mut hi = 0.0_f64;
    for &c in centers {
        for &r in radii {
            let q = ball_measure(space, c, r)? / r.powf(alpha);
            lo = lo.min(q);
            hi = hi.max(q);
        }
    }
    Ok(RegularityReport {
        alpha,
        c_lower: lo,
        c_upper: hi,
        regular: lo > 0.0 && hi.is_finite(),
    })
}

/// Values of a scalar field at the points of a grid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GridFunction(Vec<f64>);

impl GridFunction {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self(vec![c; n])
    }

    pub fn from_fn(space: &MetricMeasureGrid, f: impl Fn(usize) -> f64) -> Self {
        Self((0..space.len()).map(f).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn sup_norm(&self) -> f64 {
        crate::numeric::max_abs(&self.0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|v| *v >= 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn powf(&self, p: f64) -> Self {
        Self(self.0.iter().map(|v| v.powf(p)).collect())
    }

    /// `Σ w_i |g_i|`.
    pub fn l1_norm(&self, space: &MetricMeasureGrid) -> f64 {
        self.0
            .iter()
            .zip(space.weights())
            .map(|(v, w)| v.abs() * w)
            .sum()
    }

    pub fn check_len(&self, n: usize) -> Result<()> {
        if self.0.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                got: self.0.len(),
            });
        }
        Ok(())
    }

    pub fn check_nonnegative(&self, what: &str) -> Result<()> {
        if let Some(v) = self.0.iter().find(|v| !(**v >= 0.0)) {
            return invalid(format!("{what} must be nonnegative, found {v}"));
        }
        Ok(())
    }
}

impl Deref for GridFunction {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for GridFunction {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl From<Vec<f64>> for GridFunction {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn lattice_1d_five_points() {
        let g = build_lattice_space(1, 10.0, 5).unwrap();
        assert_eq!(g.len(), 5);
        let xs: Vec<f64> = (0..5).map(|i| g.coords(i).unwrap()[0]).collect();
        assert_eq!(xs, vec![-10.0, -5.0, 0.0, 5.0, 10.0]);
        assert!(g.weights().iter().all(|&w| w == 5.0));
        assert_eq!(g.x0(), 2);
        assert_eq!(g.alpha_hint(), 1.0);
    }

    #[test]
    fn lattice_total_mass() {
        let (r, n) = (3.7, 41);
        let g = build_lattice_space(1, r, n).unwrap();
        assert_relative_eq!(g.total_mass(), n as f64 * (2.0 * r / (n - 1) as f64), epsilon = 1e-12);
    }

    #[test]
    fn lattice_2d_unit_cells() {
        let g = build_lattice_space(2, 1.0, 3).unwrap();
        assert_eq!(g.len(), 9);
        assert!(g.weights().iter().all(|&w| w == 1.0));
        assert_eq!(g.coords(g.x0()).unwrap(), &[0.0, 0.0]);
        assert_eq!(g.coords(0).unwrap(), &[-1.0, -1.0]);
        assert_eq!(g.coords(1).unwrap(), &[-1.0, 0.0]);
    }

    #[test]
    fn lattice_rejects_bad_input() {
        assert!(build_lattice_space(1, 0.0, 5).is_err());
        assert!(build_lattice_space(1, -1.0, 5).is_err());
        assert!(build_lattice_space(0, 1.0, 5).is_err());
        assert!(build_lattice_space(4, 1.0, 5).is_err());
        assert!(build_lattice_space(1, 1.0, 4).is_err());
        assert!(build_lattice_space(1, 1.0, 1).is_err());
    }

    #[test]
    fn lattice_is_deterministic() {
        let a = build_lattice_space(2, 2.5, 11).unwrap();
        let b = build_lattice_space(2, 2.5, 11).unwrap();
        for i in 0..a.len() {
            assert_eq!(a.coords(i), b.coords(i));
            assert_eq!(a.weight(i), b.weight(i));
        }
    }

    #[test]
    fn ball_measure_small_and_large() {
        let g = build_lattice_space(1, 10.0, 201).unwrap();
        let h = 0.1;
        assert_relative_eq!(ball_measure(&g, 100, 0.4 * h).unwrap(), h, epsilon = 1e-12);
        assert_relative_eq!(ball_measure(&g, 0, 25.0).unwrap(), g.total_mass(), epsilon = 1e-12);
        // 61 points within 3 of the origin, weight 0.1 each
        let expected = (0..201)
            .filter(|&i| (g.coords(i).unwrap()[0]).abs() <= 3.0 + 1e-9)
            .count() as f64
            * 0.1;
        let m = ball_measure(&g, 100, 3.0).unwrap();
        assert_relative_eq!(m, expected, epsilon = 1e-9);
        assert!((m - 6.0).abs() <= 0.1 + 1e-9);
        assert!(ball_measure(&g, 500, 1.0).is_err());
        assert!(ball_measure(&g, 0, 0.0).is_err());
    }

    #[test]
    fn ball_measure_ratio_band() {
        let g = build_lattice_space(1, 20.0, 401).unwrap();
        let h = 0.1;
        for r in [0.35, 1.0, 2.25, 5.0, 7.9] {
            let q = ball_measure(&g, 200, r).unwrap() / (2.0 * r);
            assert!(q >= 1.0 - h / r && q <= 1.0 + h / r, "r={r} q={q}");
        }
    }

    #[test]
    fn alpha_regularity_one_dimensional() {
        let g = build_lattice_space(1, 20.0, 401).unwrap();
        let centers: Vec<usize> = (150..=250).step_by(10).collect();
        let radii = crate::numeric::lin_space(1.0, 5.0, 9);
        let rep = check_alpha_regularity(&g, 1.0, &radii, &centers).unwrap();
        assert!(rep.regular);
        assert!(rep.ratio() <= 1.5, "ratio {}", rep.ratio());

        let rep2 = check_alpha_regularity(&g, 2.0, &[1.0, 2.0, 4.0, 8.0], &[200]).unwrap();
        assert!((rep2.ratio() - 8.0).abs() < 0.8, "ratio {}", rep2.ratio());

        let single = check_alpha_regularity(&g, 1.0, &[2.0], &[200]).unwrap();
        assert_eq!(single.c_lower, single.c_upper);
        assert!(check_alpha_regularity(&g, 1.0, &[], &[200]).is_err());
    }

    #[test]
    fn distance_matrix_validation() {
        let ok = MetricMeasureGrid::from_distance_matrix(
            vec![0.0, 1.0, 1.0, 0.0],
            vec![0.5, 0.5],
            1.0,
        )
        .unwrap();
        assert_eq!(ok.dist(0, 1), 1.0);
        assert!(MetricMeasureGrid::from_distance_matrix(vec![0.0, 1.0, 2.0, 0.0], vec![1.0, 1.0], 1.0).is_err());
        assert!(MetricMeasureGrid::from_distance_matrix(vec![0.0, 1.0, 1.0, 0.0], vec![1.0, 0.0], 1.0).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("grid.csv");
        let g = build_lattice_space(2, 1.5, 5).unwrap();
        g.write_csv(&path).unwrap();
        let back = MetricMeasureGrid::read_csv(&path).unwrap();
        assert_eq!(back.len(), g.len());
        for i in 0..g.len() {
            assert_eq!(back.coords(i), g.coords(i));
            assert_eq!(back.weight(i), g.weight(i));
            assert_eq!(back.dist(i, 7), g.dist(i, 7));
        }
        assert_eq!(back.x0(), g.x0());
    }

    #[test]
    fn point_cloud_import() {
        let dir = tempfile::tempdir().unwrap();
        let wp = dir.path().join("w.csv");
        let dp = dir.path().join("d.csv");
        std::fs::write(&wp, "id,weight\n0,0.5\n1,0.25\n2,0.25\n").unwrap();
        std::fs::write(&dp, "0,1,2\n1,0,1\n2,1,0\n").unwrap();
        let g = MetricMeasureGrid::read_point_cloud(&wp, &dp, 1.0).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.dist(0, 2), 2.0);
        assert_relative_eq!(g.total_mass(), 1.0);
        assert_eq!(g.metric_violation(&[(0, 2, 1), (1, 2, 0)]), 0.0);
    }

    proptest! {
        #[test]
        fn metric_axioms_on_random_triples(seed in 0usize..10_000, dim in 1usize..=3) {
            let g = build_lattice_space(dim, 2.0, 5).unwrap();
            let n = g.len();
            let i = seed % n;
            let j = (seed / 7 + 3) % n;
            let k = (seed / 49 + 11) % n;
            prop_assert!(g.dist(i, j) >= 0.0);
            prop_assert_eq!(g.dist(i, j), g.dist(j, i));
            prop_assert_eq!(g.dist(i, i), 0.0);
            prop_assert!(g.metric_violation(&[(i, j, k)]) <= 1e-12);
        }
    }
}
