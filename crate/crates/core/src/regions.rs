//! Measurable subsets `E ⊂ M` with closed-form measure.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;

use crate::descriptor::{parse_real, split_top_level, strip_brackets};
use crate::error::{Error, Result};
use crate::model_spaces::{build_adapted_quadrature, Breakpoints, ModelSpace, Point, Quadrature, QuadratureOptions};

const TWO_PI: f64 = 2.0 * PI;

/// Closed arc `[start, start + length]` on the circle `R/2πZ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    pub start: f64,
    pub length: f64,
}

impl Arc {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || b < a || b - a > TWO_PI + 1e-12 {
            return Err(Error::InvalidArgument(format!("arc [{a}, {b}] must have 0 <= b - a <= 2π")));
        }
        let length = (b - a).min(TWO_PI);
        let start = if length >= TWO_PI { 0.0 } else { a.rem_euclid(TWO_PI) };
        Ok(Arc { start, length })
    }

    pub fn is_full(&self) -> bool {
        self.length >= TWO_PI
    }

    pub fn contains(&self, x: f64) -> bool {
        self.is_full() || (x - self.start).rem_euclid(TWO_PI) <= self.length
    }

    fn endpoints(&self) -> Vec<f64> {
        if self.is_full() {
            Vec::new()
        } else {
            vec![self.start, (self.start + self.length).rem_euclid(TWO_PI)]
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Full,
    Empty,
    /// Union of axis-aligned boxes of arcs on a torus.
    Boxes(Vec<Vec<Arc>>),
    /// Disjoint, sorted colatitude intervals `[θ₁, θ₂]` on the sphere.
    /// A polar cap of radius θ₀ is `[0, θ₀]`.
    Bands(Vec<(f64, f64)>),
    /// Explicit subset of `Z_N^d`.
    Set(BTreeSet<Vec<u64>>),
    Product(Box<Region>, Box<Region>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    space: ModelSpace,
    shape: Shape,
    measure: f64,
}

impl Region {
    fn build(space: ModelSpace, shape: Shape) -> Self {
        let measure = shape_measure(&space, &shape).clamp(0.0, space.total_measure());
        Region { space, shape, measure }
    }

    pub fn full(space: &ModelSpace) -> Self {
        Region::build(space.clone(), Shape::Full)
    }

    pub fn empty(space: &ModelSpace) -> Self {
        Region::build(space.clone(), Shape::Empty)
    }

    /// Arc `[a, b]` on the circle `torus:d=1`.
    pub fn arc(space: &ModelSpace, a: f64, b: f64) -> Result<Self> {
        Region::torus_box(space, &[(a, b)])
    }

    pub fn torus_box(space: &ModelSpace, sides: &[(f64, f64)]) -> Result<Self> {
        Region::torus_boxes(space, &[sides.to_vec()])
    }

    pub fn torus_boxes(space: &ModelSpace, boxes: &[Vec<(f64, f64)>]) -> Result<Self> {
        let dim = match space {
            ModelSpace::Torus { dim } => *dim,
            other => return Err(Error::SpaceMismatch(format!("boxes need a torus, got {other}"))),
        };
        let mut arcs = Vec::with_capacity(boxes.len());
        for sides in boxes {
            if sides.len() != dim {
                return Err(Error::SpaceMismatch(format!(
                    "box has {} sides but torus has dimension {dim}",
                    sides.len()
                )));
            }
            arcs.push(sides.iter().map(|&(a, b)| Arc::new(a, b)).collect::<Result<Vec<_>>>()?);
        }
        Ok(Region::build(space.clone(), Shape::Boxes(arcs)))
    }

    /// Polar cap of angular radius `theta0` around the north pole.
    pub fn cap(space: &ModelSpace, theta0: f64) -> Result<Self> {
        Region::bands(space, &[(0.0, theta0)])
    }

    /// Latitude band between colatitudes `t1 ≤ t2`.
    pub fn band(space: &ModelSpace, t1: f64, t2: f64) -> Result<Self> {
        Region::bands(space, &[(t1, t2)])
    }

    pub fn bands(space: &ModelSpace, intervals: &[(f64, f64)]) -> Result<Self> {
        if *space != ModelSpace::Sphere2 {
            return Err(Error::SpaceMismatch(format!("caps and bands need sphere2, got {space}")));
        }
        for &(a, b) in intervals {
            if !(0.0..=PI).contains(&a) || !(0.0..=PI).contains(&b) || b < a {
                return Err(Error::InvalidArgument(format!("band [{a}, {b}] must satisfy 0 <= t1 <= t2 <= π")));
            }
        }
        Ok(Region::build(space.clone(), Shape::Bands(merge_intervals(intervals))))
    }

    pub fn set(space: &ModelSpace, points: impl IntoIterator<Item = Vec<u64>>) -> Result<Self> {
        let (order, dim) = match space {
            ModelSpace::FiniteGroup { order, dim } => (*order, *dim),
            other => return Err(Error::SpaceMismatch(format!("index sets need a finite group, got {other}"))),
        };
        let mut set = BTreeSet::new();
        for p in points {
            if p.len() != dim || p.iter().any(|v| *v >= order) {
                return Err(Error::SpaceMismatch(format!("{p:?} is not an element of Z_{order}^{dim}")));
            }
            set.insert(p);
        }
        Ok(Region::build(space.clone(), Shape::Set(set)))
    }

    pub fn product(a: Region, b: Region) -> Self {
        let space = ModelSpace::product(a.space.clone(), b.space.clone());
        Region::build(space, Shape::Product(Box::new(a), Box::new(b)))
    }

    pub fn space(&self) -> &ModelSpace {
        &self.space
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Exact closed-form measure `|E|`.
    pub fn measure(&self) -> f64 {
        self.measure
    }

    /// Union with a region of the same space and shape family.
    pub fn union(&self, other: &Region) -> Result<Region> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch("union of regions on different spaces".into()));
        }
        let shape = match (&self.shape, &other.shape) {
            (Shape::Full, _) | (_, Shape::Full) => Shape::Full,
            (Shape::Empty, s) | (s, Shape::Empty) => s.clone(),
            (Shape::Boxes(a), Shape::Boxes(b)) => Shape::Boxes(a.iter().chain(b).cloned().collect()),
            (Shape::Bands(a), Shape::Bands(b)) => {
                let all: Vec<_> = a.iter().chain(b).copied().collect();
                Shape::Bands(merge_intervals(&all))
            }
            (Shape::Set(a), Shape::Set(b)) => Shape::Set(a.union(b).cloned().collect()),
            _ => return Err(Error::InvalidArgument("union not supported for these shapes".into())),
        };
        Ok(Region::build(self.space.clone(), shape))
    }

    /// Complement with respect to the space, for arcs, caps/bands and sets.
    pub fn complement(&self) -> Result<Region> {
        let shape = match &self.shape {
            Shape::Full => Shape::Empty,
            Shape::Empty => Shape::Full,
            Shape::Bands(bands) => {
                let mut out = Vec::new();
                let mut cursor = 0.0;
                for &(a, b) in bands {
                    if a > cursor {
                        out.push((cursor, a));
                    }
                    cursor = b;
                }
                if cursor < PI {
                    out.push((cursor, PI));
                }
                Shape::Bands(out)
            }
            Shape::Boxes(boxes) if self.space.dimension() == 1 => {
                let arcs: Vec<Arc> = boxes.iter().map(|b| b[0]).collect();
                let cells = circle_cells(&arcs.iter().flat_map(|a| a.endpoints()).collect::<Vec<_>>());
                let outside: Vec<Vec<Arc>> = cells
                    .into_iter()
                    .filter(|c| !arcs.iter().any(|a| a.contains(c.start + 0.5 * c.length)))
                    .map(|c| vec![c])
                    .collect();
                if outside.is_empty() {
                    Shape::Empty
                } else {
                    Shape::Boxes(outside)
                }
            }
            Shape::Set(set) => {
                let (order, dim) = match self.space {
                    ModelSpace::FiniteGroup { order, dim } => (order, dim),
                    _ => unreachable!(),
                };
                let total = order.pow(dim as u32);
                let all = (0..total).map(|flat| {
                    let mut rem = flat;
                    let mut x = vec![0u64; dim];
                    for axis in (0..dim).rev() {
                        x[axis] = rem % order;
                        rem /= order;
                    }
                    x
                });
                Shape::Set(all.filter(|x| !set.contains(x)).collect())
            }
            _ => return Err(Error::InvalidArgument("complement not supported for this shape".into())),
        };
        Ok(Region::build(self.space.clone(), shape))
    }

    /// Exact membership; boundary points are inside.
    pub fn contains(&self, point: &Point) -> Result<bool> {
        if !self.space.contains_point(point) {
            return Err(Error::SpaceMismatch(format!("point {point:?} is not in {}", self.space)));
        }
        Ok(self.contains_unchecked(point))
    }

    fn contains_unchecked(&self, point: &Point) -> bool {
        match (&self.shape, point) {
            (Shape::Full, _) => true,
            (Shape::Empty, _) => false,
            (Shape::Boxes(boxes), Point::Torus(x)) => {
                boxes.iter().any(|b| b.iter().zip(x).all(|(arc, xi)| arc.contains(*xi)))
            }
            (Shape::Bands(bands), Point::Sphere { theta, .. }) => {
                bands.iter().any(|(a, b)| *a <= *theta && *theta <= *b)
            }
            (Shape::Set(set), Point::Group(x)) => set.contains(x),
            (Shape::Product(a, b), Point::Product(p, q)) => a.contains_unchecked(p) && b.contains_unchecked(q),
            _ => false,
        }
    }

    /// Membership of every quadrature node.
    pub fn mask(&self, quad: &Quadrature) -> Result<Vec<bool>> {
        quad.nodes.iter().map(|p| self.contains(p)).collect()
    }

    /// Diagnostic `Σ_{nodes ∈ E} w`, to compare against [`Region::measure`].
    pub fn quadrature_measure(&self, quad: &Quadrature) -> Result<f64> {
        let mask = self.mask(quad)?;
        Ok(quad.weights.iter().zip(&mask).filter(|(_, m)| **m).map(|(w, _)| w).sum())
    }

    pub(crate) fn breakpoints(&self) -> Breakpoints {
        match (&self.shape, &self.space) {
            (Shape::Boxes(boxes), ModelSpace::Torus { dim }) => Breakpoints::Torus(
                (0..*dim).map(|axis| boxes.iter().flat_map(|b| b[axis].endpoints()).collect()).collect(),
            ),
            (Shape::Bands(bands), _) => Breakpoints::Sphere(bands.iter().flat_map(|(a, b)| [*a, *b]).collect()),
            (Shape::Product(a, b), _) => Breakpoints::Product(Box::new(a.breakpoints()), Box::new(b.breakpoints())),
            _ => Breakpoints::None,
        }
    }

    /// Quadrature on the whole space whose cells do not straddle `∂E`, so that
    /// node masking integrates band-limited products over `E` exactly. The rule
    /// is refined until at least `min_nodes_inside` nodes fall in `E`.
    pub fn adapted_quadrature(
        &self,
        cutoff: f64,
        options: &QuadratureOptions,
        min_nodes_inside: usize,
    ) -> Result<Quadrature> {
        let breakpoints = self.breakpoints();
        let mut refine = 1;
        loop {
            let quad = build_adapted_quadrature(&self.space, cutoff, options, &breakpoints, refine)?;
            let inside = self.mask(&quad)?.iter().filter(|m| **m).count();
            if inside >= min_nodes_inside || self.measure == 0.0 || self.space.is_finite() || refine >= 64 {
                return Ok(quad);
            }
            refine *= 2;
        }
    }

    /// Parses `full`, `empty`, `arc:a:b`, `box:(a,b)x(c,d)`, `cap:θ₀`,
    /// `band:t1:t2`, `set:{0,4,8}`, `set:{(0,1),(2,3)}`, `prod(R1,R2)` and
    /// unions `R1|R2`. Numbers accept `pi` forms.
    pub fn parse(space: &ModelSpace, s: &str) -> Result<Region> {
        let parts = split_top_level(s, '|');
        let mut region = Region::parse_one(space, parts[0])?;
        for p in &parts[1..] {
            region = region.union(&Region::parse_one(space, p)?)?;
        }
        Ok(region)
    }

    fn parse_one(space: &ModelSpace, s: &str) -> Result<Region> {
        let s = s.trim();
        match s {
            "full" => return Ok(Region::full(space)),
            "empty" => return Ok(Region::empty(space)),
            _ => {}
        }
        if let Some(inner) = s.strip_prefix("prod(").and_then(|r| r.strip_suffix(')')) {
            let (sa, sb) = match space {
                ModelSpace::Product(a, b) => (a.as_ref(), b.as_ref()),
                other => {
                    return Err(Error::descriptor("region", s, format!("prod(..) needs a product space, got {other}")))
                }
            };
            let parts = split_top_level(inner, ',');
            if parts.len() != 2 {
                return Err(Error::descriptor("region", s, "prod needs two factor regions"));
            }
            return Ok(Region::product(Region::parse(sa, parts[0])?, Region::parse(sb, parts[1])?));
        }
        let (kind, rest) = s.split_once(':').ok_or_else(|| Error::descriptor("region", s, "expected kind:params"))?;
        let reals = |r: &str| -> Result<Vec<f64>> { r.split(':').map(|t| parse_real("region", t)).collect() };
        match kind {
            "arc" => match reals(rest)?.as_slice() {
                [a, b] => Region::arc(space, *a, *b),
                _ => Err(Error::descriptor("region", s, "arc needs arc:a:b")),
            },
            "cap" => match reals(rest)?.as_slice() {
                [t] => Region::cap(space, *t),
                _ => Err(Error::descriptor("region", s, "cap needs cap:θ₀")),
            },
            "band" => match reals(rest)?.as_slice() {
                [a, b] => Region::band(space, *a, *b),
                _ => Err(Error::descriptor("region", s, "band needs band:t1:t2")),
            },
            "box" => {
                let sides = rest
                    .split('x')
                    .map(|side| {
                        let inner = strip_brackets("region", side, '(', ')')?;
                        let v: Vec<f64> = inner.split(',').map(|t| parse_real("region", t)).collect::<Result<_>>()?;
                        match v.as_slice() {
                            [a, b] => Ok((*a, *b)),
                            _ => Err(Error::descriptor("region", side, "box side needs (a,b)")),
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Region::torus_box(space, &sides)
            }
            "set" => {
                let inner = strip_brackets("region", rest, '{', '}')?;
                let mut points = Vec::new();
                if !inner.trim().is_empty() {
                    for item in split_top_level(inner, ',') {
                        let coords =
                            if item.starts_with('(') { strip_brackets("region", item, '(', ')')? } else { item };
                        let p = coords
                            .split(',')
                            .map(|t| {
                                t.trim()
                                    .parse::<u64>()
                                    .map_err(|_| Error::descriptor("region", t, "expected a group element"))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        points.push(p);
                    }
                }
                Region::set(space, points)
            }
            other => Err(Error::descriptor("region", other, "unknown region kind")),
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            Shape::Full => write!(f, "full"),
            Shape::Empty => write!(f, "empty"),
            Shape::Boxes(boxes) => {
                for (i, b) in boxes.iter().enumerate() {
                    if i > 0 {
                        write!(f, "|")?;
                    }
                    if b.len() == 1 {
                        write!(f, "arc:{}:{}", b[0].start, b[0].start + b[0].length)?;
                    } else {
                        write!(f, "box:")?;
                        for (k, a) in b.iter().enumerate() {
                            if k > 0 {
                                write!(f, "x")?;
                            }
                            write!(f, "({},{})", a.start, a.start + a.length)?;
                        }
                    }
                }
                Ok(())
            }
            Shape::Bands(bands) => {
                if bands.is_empty() {
                    return write!(f, "empty");
                }
                for (i, (a, b)) in bands.iter().enumerate() {
                    if i > 0 {
                        write!(f, "|")?;
                    }
                    if *a == 0.0 {
                        write!(f, "cap:{b}")?
                    } else {
                        write!(f, "band:{a}:{b}")?
                    }
                }
                Ok(())
            }
            Shape::Set(set) => {
                write!(f, "set:{{")?;
                for (i, p) in set.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    if p.len() == 1 {
                        write!(f, "{}", p[0])?;
                    } else {
                        let items: Vec<String> = p.iter().map(|v| v.to_string()).collect();
                        write!(f, "({})", items.join(","))?;
                    }
                }
                write!(f, "}}")
            }
            Shape::Product(a, b) => write!(f, "prod({a},{b})"),
        }
    }
}

fn merge_intervals(intervals: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut sorted: Vec<(f64, f64)> = intervals.to_vec();
    sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (a, b) in sorted {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

/// The circle cut at the given points into consecutive arcs.
fn circle_cells(cuts: &[f64]) -> Vec<Arc> {
    let mut edges: Vec<f64> = cuts.iter().map(|c| c.rem_euclid(TWO_PI)).collect();
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    if edges.is_empty() {
        return vec![Arc { start: 0.0, length: TWO_PI }];
    }
    (0..edges.len())
        .map(|i| {
            let a = edges[i];
            let b = if i + 1 < edges.len() { edges[i + 1] } else { edges[0] + TWO_PI };
            Arc { start: a, length: b - a }
        })
        .filter(|c| c.length > 0.0)
        .collect()
}

fn shape_measure(space: &ModelSpace, shape: &Shape) -> f64 {
    match shape {
        Shape::Full => space.total_measure(),
        Shape::Empty => 0.0,
        Shape::Boxes(boxes) => {
            if boxes.is_empty() {
                return 0.0;
            }
            if boxes.len() == 1 {
                return boxes[0].iter().map(|a| a.length).product();
            }
            // disjointify on the grid of all box edges
            let dim = boxes[0].len();
            let cells: Vec<Vec<Arc>> = (0..dim)
                .map(|axis| circle_cells(&boxes.iter().flat_map(|b| b[axis].endpoints()).collect::<Vec<_>>()))
                .collect();
            let mut total = 0.0;
            let mut idx = vec![0usize; dim];
            loop {
                let centre: Vec<f64> =
                    (0..dim).map(|k| cells[k][idx[k]].start + 0.5 * cells[k][idx[k]].length).collect();
                if boxes.iter().any(|b| b.iter().zip(&centre).all(|(a, x)| a.contains(*x))) {
                    total += (0..dim).map(|k| cells[k][idx[k]].length).product::<f64>();
                }
                let mut axis = 0;
                loop {
                    if axis == dim {
                        return total;
                    }
                    idx[axis] += 1;
                    if idx[axis] == cells[axis].len() {
                        idx[axis] = 0;
                        axis += 1;
                    } else {
                        break;
                    }
                }
            }
        }
        Shape::Bands(bands) => bands.iter().map(|(a, b)| TWO_PI * (a.cos() - b.cos())).sum(),
        Shape::Set(set) => set.len() as f64,
        Shape::Product(a, b) => a.measure() * b.measure(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_spaces::build_quadrature_with;

    fn circle() -> ModelSpace {
        ModelSpace::Torus { dim: 1 }
    }

    #[test]
    fn closed_form_measures() {
        assert!((Region::arc(&circle(), 0.0, PI).unwrap().measure() - PI).abs() < 1e-15);
        assert!((Region::cap(&ModelSpace::Sphere2, PI / 2.0).unwrap().measure() - 2.0 * PI).abs() < 1e-12);
        let z12 = ModelSpace::FiniteGroup { order: 12, dim: 1 };
        assert_eq!(Region::set(&z12, [vec![0], vec![4], vec![8]]).unwrap().measure(), 3.0);
        let t2 = ModelSpace::Torus { dim: 2 };
        assert!((Region::torus_box(&t2, &[(0.0, 1.0), (0.0, 2.0)]).unwrap().measure() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn overlapping_boxes_are_disjointified() {
        let t2 = ModelSpace::Torus { dim: 2 };
        let r = Region::torus_boxes(&t2, &[vec![(0.0, 2.0), (0.0, 2.0)], vec![(1.0, 3.0), (1.0, 3.0)]]).unwrap();
        assert!((r.measure() - 7.0).abs() < 1e-12);
        let wrap = Region::torus_boxes(&circle(), &[vec![(5.0, 7.0)], vec![(0.0, 1.0)]]).unwrap();
        assert!((wrap.measure() - (2.0 * PI - 5.0 + 1.0)).abs() < 1e-12);
        let bands = Region::bands(&ModelSpace::Sphere2, &[(0.0, 1.0), (0.5, 1.5)]).unwrap();
        assert!((bands.measure() - TWO_PI * (1.0 - 1.5f64.cos())).abs() < 1e-12);
    }

    #[test]
    fn membership() {
        let a = Region::arc(&circle(), 0.0, PI).unwrap();
        assert!(a.contains(&Point::Torus(vec![PI / 2.0])).unwrap());
        assert!(a.contains(&Point::Torus(vec![PI])).unwrap());
        assert!(a.contains(&Point::Torus(vec![0.0])).unwrap());
        assert!(!a.contains(&Point::Torus(vec![4.0])).unwrap());
        let cap = Region::cap(&ModelSpace::Sphere2, PI / 4.0).unwrap();
        assert!(!cap.contains(&Point::Sphere { theta: PI / 3.0, phi: 0.0 }).unwrap());
        let z12 = ModelSpace::FiniteGroup { order: 12, dim: 1 };
        let s = Region::set(&z12, [vec![0], vec![4], vec![8]]).unwrap();
        assert!(s.contains(&Point::Group(vec![4])).unwrap());
        assert!(s.contains(&Point::Sphere { theta: 0.0, phi: 0.0 }).is_err());
    }

    #[test]
    fn quadrature_measure_diagnostics() {
        let full = Region::full(&circle());
        let q =
            build_quadrature_with(&circle(), 3.0, &QuadratureOptions { min_points_per_axis: 2001, oversample: 1.0 })
                .unwrap();
        assert_eq!(q.len(), 2001);
        assert!((full.quadrature_measure(&q).unwrap() - 2.0 * PI).abs() < 1e-12);
        let arc = Region::arc(&circle(), 0.0, PI).unwrap();
        assert!((arc.quadrature_measure(&q).unwrap() - PI).abs() <= 2.0 * (2.0 * PI / 2001.0));
        assert_eq!(Region::empty(&circle()).quadrature_measure(&q).unwrap(), 0.0);
    }

    #[test]
    fn complements_add_up() {
        let space = ModelSpace::Sphere2;
        for r in [Region::cap(&space, 0.7).unwrap(), Region::band(&space, 0.5, 1.2).unwrap()] {
            let c = r.complement().unwrap();
            assert!((r.measure() + c.measure() - 4.0 * PI).abs() < 1e-12);
        }
        let arc = Region::arc(&circle(), 1.0, 2.5).unwrap();
        assert!((arc.measure() + arc.complement().unwrap().measure() - TWO_PI).abs() < 1e-12);
    }

    #[test]
    fn adapted_quadrature_is_exact_on_the_region() {
        let cap = Region::cap(&ModelSpace::Sphere2, 0.9).unwrap();
        let q = cap.adapted_quadrature(4.0, &QuadratureOptions::default(), 100).unwrap();
        assert!((cap.quadrature_measure(&q).unwrap() - cap.measure()).abs() < 1e-12);
        assert!(cap.mask(&q).unwrap().iter().filter(|m| **m).count() >= 100);
        let t2 = ModelSpace::Torus { dim: 2 };
        let b = Region::torus_boxes(&t2, &[vec![(0.0, 2.0), (0.0, 2.0)], vec![(1.0, 3.0), (1.0, 3.0)]]).unwrap();
        let q = b.adapted_quadrature(2.0, &QuadratureOptions::default(), 100).unwrap();
        assert!((b.quadrature_measure(&q).unwrap() - 7.0).abs() < 1e-12);
    }

    #[test]
    fn parses_descriptors() {
        let a = Region::parse(&circle(), "arc:0:3").unwrap();
        assert!((a.measure() - 3.0).abs() < 1e-12);
        let b = Region::parse(&ModelSpace::Torus { dim: 2 }, "box:(0,1)x(0,2)").unwrap();
        assert!((b.measure() - 2.0).abs() < 1e-15);
        let c = Region::parse(&ModelSpace::Sphere2, "cap:0.75").unwrap();
        assert!((c.measure() - TWO_PI * (1.0 - 0.75f64.cos())).abs() < 1e-12);
        let u = Region::parse(&ModelSpace::Sphere2, "cap:0.5|band:0.5:1.2").unwrap();
        assert!((u.measure() - TWO_PI * (1.0 - 1.2f64.cos())).abs() < 1e-12);
        let z = ModelSpace::FiniteGroup { order: 12, dim: 1 };
        assert_eq!(Region::parse(&z, "set:{0,4,8}").unwrap().measure(), 3.0);
        let z2 = ModelSpace::FiniteGroup { order: 4, dim: 2 };
        assert_eq!(Region::parse(&z2, "set:{(0,1),(2,3)}").unwrap().measure(), 2.0);
        let p = ModelSpace::product(circle(), circle());
        let pr = Region::parse(&p, "prod(arc:0:1,arc:0:pi)").unwrap();
        assert!((pr.measure() - PI).abs() < 1e-15);
        assert!(Region::parse(&circle(), "cap:1").is_err());
        assert!(Region::parse(&circle(), "arc:0").is_err());
        assert!(Region::parse(&z, "set:{13}").is_err());
        // round trip through Display
        let back = Region::parse(&ModelSpace::Sphere2, &u.to_string()).unwrap();
        assert!((back.measure() - u.measure()).abs() < 1e-12);
    }
}
