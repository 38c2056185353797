use num_complex::Complex64;

use manifold_uncertainty::concentration::{band_project, gram_matrix, BandlimitedFunction, Discretization, Expansion};
use manifold_uncertainty::model_spaces::{enumerate_basis, QuadratureOptions};
use manifold_uncertainty::output::{report_table, Table, Value};
use manifold_uncertainty::random_spectra::{
    estimate_cq, generic_subset, gmpt_split, random_coefficients, CqConfig, GmptConfig, RandomSubsetSpec,
};
use manifold_uncertainty::regions::Region;
use manifold_uncertainty::report::{InequalityReport, Status};
use manifold_uncertainty::rng::stream;
use manifold_uncertainty::spectral::{
    check_homogeneity, check_joint_homogeneity, local_weyl, sample_points, sogge_constant_estimate, weyl_count,
    SpectralSet, SpectralValues,
};
use manifold_uncertainty::uncertainty::{self, interpolation_bound, HOMOGENEITY_TOLERANCE};
use manifold_uncertainty::{Error, ModelSpace, Point, Result};

use crate::options::{FunctionKind, Inequality, RunOptions};

/// A table plus what it says about the exit status.
pub struct Outcome {
    pub table: Table,
    pub failures: usize,
    pub blocked: Vec<String>,
}

impl Outcome {
    fn plain(table: Table) -> Self {
        Outcome { table, failures: 0, blocked: Vec::new() }
    }

    pub fn from_reports(reports: &[InequalityReport]) -> Self {
        Outcome {
            table: report_table(reports),
            failures: reports.iter().filter(|r| r.status == Status::Fails).count(),
            blocked: reports
                .iter()
                .filter(|r| r.status == Status::Blocked)
                .map(|r| format!("{}: {}", r.name, r.caveats.join("; ")))
                .collect(),
        }
    }
}

/// Descriptors parsed up front, before anything is computed.
pub struct Parsed {
    pub space: ModelSpace,
    pub region: Region,
    pub spectrum: Option<SpectralSet>,
}

impl Parsed {
    pub fn new(o: &RunOptions) -> Result<Self> {
        let space: ModelSpace = o.space.parse()?;
        let region = Region::parse(&space, &o.region)?;
        let spectrum = o.spectrum.as_deref().map(|s| SpectralSet::parse(&space, s)).transpose()?;
        if let Some(q) = o.q {
            if q.is_nan() || q <= 2.0 {
                return Err(Error::InvalidArgument(format!("--q must exceed 2, got {q}")));
            }
        }
        Ok(Parsed { space, region, spectrum })
    }

    fn spectrum(&self) -> Result<&SpectralSet> {
        self.spectrum.as_ref().ok_or_else(|| Error::InvalidArgument("--spectrum is required".into()))
    }
}

fn quadrature(o: &RunOptions, oversample: f64) -> QuadratureOptions {
    QuadratureOptions { min_points_per_axis: o.quadrature_points.unwrap_or(1), oversample }
}

fn cutoff_for(o: &RunOptions, set: &SpectralSet) -> f64 {
    o.cutoff.unwrap_or(set.max_frequency() + 1.0)
}

/// Smallest integer cutoff that keeps at least `n` basis elements.
fn cutoff_for_count(space: &ModelSpace, n: usize) -> Result<f64> {
    if let Some(top) = space.max_frequency() {
        return Ok(top);
    }
    let mut lambda = 1.0;
    while enumerate_basis(space, lambda)?.len() < n {
        lambda += 1.0;
    }
    Ok(lambda)
}

fn point_str(p: &Point) -> String {
    fn join<T: ToString>(v: &[T]) -> String {
        v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    }
    match p {
        Point::Torus(x) => format!("({})", join(x)),
        Point::Sphere { theta, phi } => format!("(theta={theta},phi={phi})"),
        Point::Group(x) => format!("({})", join(x)),
        Point::Product(a, b) => format!("{}x{}", point_str(a), point_str(b)),
    }
}

fn floats(v: &[f64]) -> Value {
    Value::List(v.iter().map(|x| Value::Float(*x)).collect())
}

fn indices(v: &[usize]) -> Value {
    Value::List(v.iter().map(|x| Value::from(*x)).collect())
}

fn complexes(v: &[Complex64]) -> Value {
    Value::List(v.iter().map(|z| floats(&[z.re, z.im])).collect())
}

pub fn basis(o: &RunOptions) -> Result<Outcome> {
    let p = Parsed::new(o)?;
    let cutoff = match (o.cutoff.or(o.lambda), p.space.max_frequency()) {
        (Some(c), _) => c,
        (None, Some(top)) => top,
        (None, None) => return Err(Error::InvalidArgument("--cutoff is required on an infinite space".into())),
    };
    let mut t = Table::new("basis", &["index", "label", "eigenvalue", "frequency", "joint"]);
    for e in enumerate_basis(&p.space, cutoff)? {
        t.push(vec![
            e.index.into(),
            e.label.to_string().into(),
            e.eigenvalue.into(),
            e.frequency.into(),
            floats(&e.joint),
        ]);
    }
    Ok(Outcome::plain(t))
}

fn probe(o: &RunOptions, space: &ModelSpace) -> Vec<(String, Point)> {
    let mut pts: Vec<_> = space.special_points().into_iter().map(|p| ("special".to_string(), p)).collect();
    pts.extend(sample_points(space, o.points, o.seed, 0).into_iter().map(|p| ("random".to_string(), p)));
    pts
}

pub fn weyl(o: &RunOptions) -> Result<Outcome> {
    let p = Parsed::new(o)?;
    let lambda = o.lambda.ok_or_else(|| Error::InvalidArgument("--lambda is required".into()))?;
    let count = weyl_count(&p.space, lambda)?;
    let main_term = p.space.weyl_constant() * lambda.powi(p.space.dimension() as i32);
    let mut t = Table::new(
        "weyl",
        &["lambda", "point_kind", "point", "count", "local_count", "local_count_times_measure", "weyl_main_term"],
    );
    for (kind, x) in probe(o, &p.space) {
        let local = local_weyl(&p.space, &x, lambda)?;
        t.push(vec![
            lambda.into(),
            kind.into(),
            point_str(&x).into(),
            count.into(),
            local.into(),
            (local * p.space.total_measure()).into(),
            main_term.into(),
        ]);
    }
    Ok(Outcome::plain(t))
}

pub fn homogeneity(o: &RunOptions) -> Result<Outcome> {
    let p = Parsed::new(o)?;
    let set = match (&p.spectrum, o.lambda) {
        (Some(s), _) => s.clone(),
        (None, Some(l)) => SpectralSet::scalar(&p.space, &[l])?,
        (None, None) => return Err(Error::InvalidArgument("--spectrum or --lambda is required".into())),
    };
    let points: Vec<Point> = probe(o, &p.space).into_iter().map(|(_, x)| x).collect();
    let mut t = Table::new("homogeneity", &["value", "multiplicity", "expected", "max_deviation", "samples", "holds"]);
    let mut failures = 0;
    let mut push = |value: Vec<f64>, h: manifold_uncertainty::spectral::Homogeneity| {
        failures += usize::from(!h.holds);
        t.push(vec![
            floats(&value),
            h.multiplicity.into(),
            h.expected.into(),
            h.max_deviation.into(),
            h.samples.into(),
            h.holds.into(),
        ]);
    };
    match set.values() {
        SpectralValues::Scalar(values) => {
            for v in values {
                push(vec![*v], check_homogeneity(&p.space, *v, &points, HOMOGENEITY_TOLERANCE)?);
            }
        }
        SpectralValues::Joint(values) => {
            for v in values {
                push(v.clone(), check_joint_homogeneity(&p.space, v, &points, HOMOGENEITY_TOLERANCE)?);
            }
        }
    }
    Ok(Outcome { table: t, failures, blocked: Vec::new() })
}

pub fn concentrate(o: &RunOptions) -> Result<Outcome> {
    let p = Parsed::new(o)?;
    let set = p.spectrum()?;
    let disc = Discretization::for_region(&p.region, cutoff_for(o, set), &quadrature(o, 1.0))?;
    let g = gram_matrix(set, &p.region, &disc)?;
    if let Some(path) = &o.export_matrix {
        std::fs::write(path, g.to_json())?;
    }
    let mut t = Table::new(
        "concentration",
        &["rank", "eigenvalue", "dimension", "trace", "region_measure", "nodes_in_region", "coefficients"],
    );
    for (k, ev) in g.eigenvalues.iter().enumerate() {
        let coefficients = if k < o.top { complexes(&g.eigenvector(k)) } else { Value::Null };
        t.push(vec![
            k.into(),
            (*ev).into(),
            g.dim().into(),
            g.trace.into(),
            p.region.measure().into(),
            g.nodes_in_region.into(),
            coefficients,
        ]);
    }
    Ok(Outcome::plain(t))
}

/// Builds `f` on `disc` from the chosen recipe.
fn test_function(
    kind: FunctionKind,
    o: &RunOptions,
    region: &Region,
    set: Option<&SpectralSet>,
    disc: &Discretization,
) -> Result<Expansion> {
    let need =
        || set.ok_or_else(|| Error::InvalidArgument(format!("--function {kind:?} needs --spectrum").to_lowercase()));
    let nodes = disc.quadrature();
    let f = match kind {
        FunctionKind::Slepian => gram_matrix(need()?, region, disc)?.slepian(0).to_expansion(),
        FunctionKind::Random => {
            let set = need()?;
            let mut rng = stream(o.seed, 0);
            let mut a = random_coefficients(&mut rng, disc.basis().len());
            for (j, v) in a.iter_mut().enumerate() {
                if !set.contains_index(j) {
                    *v *= o.leak;
                }
            }
            Expansion::new(disc.space(), a)
        }
        FunctionKind::Constant => disc.analyze(&vec![Complex64::new(1.0, 0.0); nodes.len()])?,
        FunctionKind::Indicator => {
            let mask = region.mask(nodes)?;
            disc.analyze(&mask.iter().map(|m| Complex64::new(f64::from(u8::from(*m)), 0.0)).collect::<Vec<_>>())?
        }
    };
    if f.norm() == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(f)
}

fn group_of(space: &ModelSpace) -> Result<(u64, usize)> {
    match space {
        ModelSpace::FiniteGroup { order, dim } => Ok((*order, *dim)),
        other => Err(Error::InvalidArgument(format!("this check needs a finite group, got {other}"))),
    }
}

/// Values of `f` on the whole group, row-major.
fn group_values(o: &RunOptions, p: &Parsed) -> Result<Vec<Complex64>> {
    group_of(&p.space)?;
    let disc =
        Discretization::for_space(&p.space, p.space.max_frequency().unwrap_or(0.0), &QuadratureOptions::default())?;
    let mask = p.region.mask(disc.quadrature())?;
    match o.function.unwrap_or(FunctionKind::Indicator) {
        FunctionKind::Indicator => Ok(mask.iter().map(|m| Complex64::new(f64::from(u8::from(*m)), 0.0)).collect()),
        FunctionKind::Random => {
            let mut rng = stream(o.seed, 0);
            let a = random_coefficients(&mut rng, mask.len());
            Ok(a.into_iter().zip(&mask).map(|(v, m)| if *m { v } else { Complex64::new(0.0, 0.0) }).collect())
        }
        kind => disc.synthesize(&test_function(kind, o, &p.region, p.spectrum.as_ref(), &disc)?),
    }
}

pub fn donoho_stark(o: &RunOptions) -> Result<Vec<InequalityReport>> {
    let p = Parsed::new(o)?;
    let (order, dim) = group_of(&p.space)?;
    let values = group_values(o, &p)?;
    Ok(vec![uncertainty::check_donoho_stark(order, dim, &values)?.input("region", &p.region).seed(o.seed)])
}

pub fn check(o: &RunOptions) -> Result<Vec<InequalityReport>> {
    let p = Parsed::new(o)?;
    let inequality = o.inequality.ok_or_else(|| Error::InvalidArgument("--inequality is required".into()))?;
    let mut reports = match inequality {
        Inequality::Lca => {
            let (order, dim) = group_of(&p.space)?;
            let values = group_values(o, &p)?;
            vec![uncertainty::check_lca_up(order, dim, &values)?.input("region", &p.region)]
        }
        Inequality::Bourgain => vec![bourgain(o, &p)?],
        Inequality::RandomManifold => vec![random_manifold(o, &p)?],
        _ => manifold(o, &p, inequality)?,
    };
    for r in &mut reports {
        if r.seed.is_none() {
            r.seed = Some(o.seed);
        }
    }
    Ok(reports)
}

fn bourgain(o: &RunOptions, p: &Parsed) -> Result<InequalityReport> {
    let set = p.spectrum()?;
    let q = o.q.unwrap_or(4.0);
    let disc = Discretization::for_region(&p.region, cutoff_for(o, set), &quadrature(o, 1.0))?;
    let f = match o.function.unwrap_or(FunctionKind::Indicator) {
        FunctionKind::Indicator => {
            let band = band_project(&test_function(FunctionKind::Indicator, o, &p.region, Some(set), &disc)?, set);
            let norm = band.norm();
            if norm < 1e-12 {
                return Err(Error::InvalidArgument(
                    "the indicator of the region has no component on the spectrum".into(),
                ));
            }
            BandlimitedFunction::new(set, band.coefficients.iter().map(|a| a / norm).collect())?.to_expansion()
        }
        kind => test_function(kind, o, &p.region, Some(set), &disc)?,
    };
    let c_upper = o.c_upper.unwrap_or_else(|| interpolation_bound(set.len(), q));
    uncertainty::check_bourgainup(&disc, set, &f, &p.region, q, c_upper)
}

fn manifold(o: &RunOptions, p: &Parsed, inequality: Inequality) -> Result<Vec<InequalityReport>> {
    let set = p.spectrum()?;
    let cutoff = cutoff_for(o, set);
    let disc = Discretization::for_region(&p.region, cutoff, &quadrature(o, 1.0))?;
    let f = test_function(o.function.unwrap_or(FunctionKind::Slepian), o, &p.region, Some(set), &disc)?;
    let (region, seed) = (&p.region, o.seed);
    Ok(match inequality {
        Inequality::Prop => vec![uncertainty::check_prop_manifold(&f, region, set, &disc)?],
        Inequality::Homogeneous => vec![uncertainty::check_homogeneous_bound(&f, region, set, &disc, seed)?],
        Inequality::Supnorm => vec![uncertainty::check_supnorm_bound(&f, region, set, &disc, o.x_samples, seed)?],
        Inequality::Covering => {
            let c_m = match o.c_m {
                Some(c) => c,
                None => sogge_constant_estimate(&p.space, set.max_frequency().max(0.0) + 1.0, o.x_samples, seed)?.value,
            };
            vec![uncertainty::check_covering_bound(&f, region, set, &disc, c_m)?]
        }
        Inequality::Joint => uncertainty::check_joint(&f, region, set, &disc, seed)?,
        Inequality::Lca | Inequality::Bourgain | Inequality::RandomManifold => unreachable!("handled by check"),
    })
}

fn split_setup(o: &RunOptions, p: &Parsed) -> Result<(usize, Discretization, QuadratureOptions)> {
    let n = o.n.unwrap_or(64);
    let cutoff = match o.cutoff {
        Some(c) => c,
        None => cutoff_for_count(&p.space, n)?,
    };
    let opts = quadrature(o, 2.0);
    Ok((n, Discretization::for_space(&p.space, cutoff, &opts)?, opts))
}

fn gmpt_config(o: &RunOptions) -> GmptConfig {
    GmptConfig { c_param: o.c_param, subsets: o.subsets, coefficient_trials: o.coefficient_trials, seed: o.seed }
}

fn random_manifold(o: &RunOptions, p: &Parsed) -> Result<InequalityReport> {
    let (n, disc, opts) = split_setup(o, p)?;
    let split = gmpt_split(&disc, n, &gmpt_config(o))?;
    let rdisc = Discretization::for_region(&p.region, disc.cutoff(), &opts)?;
    let elements: Vec<_> = split.subset.iter().map(|j| rdisc.basis()[*j].clone()).collect();
    let set = SpectralSet::joint_from_elements(&p.space, &elements)?;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); rdisc.basis().len()];
    match o.function.unwrap_or(FunctionKind::Slepian) {
        FunctionKind::Slepian => {
            let g = gram_matrix(&set, &p.region, &rdisc)?;
            for (j, v) in set.indices().iter().zip(g.eigenvector(0)) {
                coeffs[*j] = v;
            }
        }
        FunctionKind::Random => {
            let mut rng = stream(o.seed, 0);
            for (j, v) in split.subset.iter().zip(random_coefficients(&mut rng, split.subset.len())) {
                coeffs[*j] = v;
            }
        }
        other => {
            return Err(Error::InvalidArgument(format!("random-manifold takes slepian or random f, got {other:?}")))
        }
    }
    let f = Expansion::new(&p.space, coeffs);
    uncertainty::check_random_manifold_bound(&f, &p.region, &rdisc, &split)
}

pub fn lambda_q(o: &RunOptions) -> Result<Outcome> {
    let p = Parsed::new(o)?;
    let q = o.q.unwrap_or(4.0);
    let oversample = (q.ceil() / 2.0).max(1.0);
    let (subset, cutoff) = match &p.spectrum {
        Some(set) => (set.indices(), cutoff_for(o, set)),
        None => {
            let n = o.n.unwrap_or(64);
            let cutoff = o.cutoff.map_or_else(|| cutoff_for_count(&p.space, n), Ok)?;
            let n = n.min(enumerate_basis(&p.space, cutoff)?.len());
            (generic_subset(&RandomSubsetSpec::new(n, q, o.seed)?), cutoff)
        }
    };
    if subset.is_empty() {
        return Err(Error::InvalidArgument("the subset is empty".into()));
    }
    let disc = Discretization::for_space(&p.space, cutoff, &quadrature(o, oversample))?;
    let cfg = CqConfig { trials: o.trials, seed: o.seed, ..Default::default() };
    let e = estimate_cq(&disc, &subset, q, &cfg, None)?;
    let holds = e.c_lower <= e.c_interp * (1.0 + 1e-9);
    let mut t = Table::new(
        "lambda_q_estimate",
        &[
            "q",
            "size",
            "c_lower",
            "c_interp",
            "holds",
            "bounded",
            "trials",
            "ascent_iterations",
            "seed",
            "subset",
            "best_coefficients",
        ],
    );
    t.push(vec![
        e.q.into(),
        e.subset.len().into(),
        e.c_lower.into(),
        e.c_interp.into(),
        holds.into(),
        e.bounded.into(),
        e.trials.into(),
        e.ascent_iterations.into(),
        e.seed.into(),
        indices(&e.subset),
        complexes(&e.best_coefficients),
    ]);
    Ok(Outcome { table: t, failures: usize::from(!holds), blocked: Vec::new() })
}

pub fn gmpt(o: &RunOptions) -> Result<Outcome> {
    let p = Parsed::new(o)?;
    let (n, disc, _) = split_setup(o, &p)?;
    let s = gmpt_split(&disc, n, &gmpt_config(o))?;
    let mut t = Table::new(
        "random_split",
        &[
            "n",
            "subset_size",
            "size_deviation",
            "c_param",
            "k_observed",
            "k_subset",
            "k_complement",
            "b_sup",
            "benchmark",
            "success_fraction",
            "subsets_tried",
            "seed",
            "subset",
        ],
    );
    t.push(vec![
        s.n.into(),
        s.subset.len().into(),
        s.size_deviation.into(),
        s.c_param.into(),
        s.k_observed.into(),
        s.k_subset.into(),
        s.k_complement.into(),
        s.b_sup.into(),
        s.benchmark.into(),
        s.success_fraction.into(),
        s.subsets_tried.into(),
        s.seed.into(),
        indices(&s.subset),
    ]);
    Ok(Outcome::plain(t))
}
