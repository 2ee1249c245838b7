//! The five experiment drivers.

use std::f64::consts::PI;
use std::time::Instant;

use anyhow::Result;
use fspec_core::fiber::{binet_legendre_at, FiberQuadrature};
use fspec_core::metric::{quasireversibility, MetricConstants};
use fspec_core::randers::{
    angular_closed_forms, angular_integrals, energy_density_direct, large_eigenvalue_condition, randers_axis_symbol,
    threshold_eta,
};
use fspec_core::sampling::{self, Sampling};
use fspec_core::spectral::{assemble, convergence_study, SpectralProblem};
use fspec_core::{Covector, MetricSpec, Spectrum, SymbolField, TorusGrid, TorusPoint};

use crate::config::{ExperimentConfig, ExperimentKind, MetricPair, NamedMetric};
use crate::report::{Diagnostics, ExperimentReport, RowSink};
use crate::svg::{Plot, Series};

/// A solved case kept for table export.
pub struct Solved {
    pub case: String,
    pub field: SymbolField,
    pub spectrum: Spectrum,
}

/// Everything a run produces.
pub struct Run {
    pub report: ExperimentReport,
    /// `(file name, document)`.
    pub plots: Vec<(String, String)>,
    pub solved: Vec<Solved>,
}

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    sink: RowSink,
    plots: Vec<(String, String)>,
    solved: Vec<Solved>,
}

pub fn run(cfg: &ExperimentConfig) -> Result<Run> {
    let start = Instant::now();
    let mut ctx = Ctx {
        cfg,
        sink: RowSink::new(&cfg.hash(), cfg.experiment.name()),
        plots: Vec::new(),
        solved: Vec::new(),
    };
    match cfg.experiment {
        ExperimentKind::TorusLargeEigenvalue => torus_large_eigenvalue(&mut ctx)?,
        ExperimentKind::BilipschitzCheck => bilipschitz_check(&mut ctx)?,
        ExperimentKind::RandersIdentities => randers_identities(&mut ctx)?,
        ExperimentKind::ConformalCheck => conformal_check(&mut ctx)?,
        ExperimentKind::Convergence => convergence(&mut ctx)?,
    }
    let report = ctx.sink.finish(cfg.echo(), start.elapsed().as_secs_f64());
    Ok(Run { report, plots: ctx.plots, solved: ctx.solved })
}

/// Gershgorin bound on `λ_max` of `M⁻¹K` divided by `λ₁`.
fn condition_bound(problem: &SpectralProblem, lambda1: f64) -> f64 {
    let k = problem.stiffness();
    let m = problem.mass();
    let max = (0..k.n())
        .map(|i| k.row(i).map(|(j, v)| v.abs() / (m[i] * m[j]).sqrt()).sum::<f64>())
        .fold(0.0, f64::max);
    max / lambda1
}

impl Ctx<'_> {
    fn grid(&self) -> Result<TorusGrid> {
        Ok(TorusGrid::square(self.cfg.grid)?)
    }

    fn field(&self, spec: &MetricSpec, grid: &TorusGrid) -> Result<SymbolField> {
        Ok(SymbolField::compute(spec, grid, &self.cfg.fiber_rule())?)
    }

    /// Assemble and solve, recording diagnostics.
    fn solve(&mut self, case: &str, field: &SymbolField, k: usize) -> Result<Spectrum> {
        let t = Instant::now();
        let problem = assemble(field)?;
        let spectrum = problem.solve(k, &self.cfg.solver_options())?;
        let lambda1 = spectrum.eigenvalues.get(1).copied().unwrap_or(f64::NAN);
        self.sink.diagnostics.push(Diagnostics {
            case: case.to_string(),
            grid: field.grid().nx(),
            method: format!("{:?}", spectrum.method).to_lowercase(),
            cycles: spectrum.cycles,
            max_residual: spectrum.residuals.iter().copied().fold(0.0, f64::max),
            fiber_nodes: field.fiber_nodes,
            fiber_converged: field.converged,
            condition: condition_bound(&problem, lambda1),
            seconds: t.elapsed().as_secs_f64(),
        });
        if self.cfg.output.tables {
            self.solved.push(Solved { case: case.to_string(), field: field.clone(), spectrum: spectrum.clone() });
        }
        Ok(spectrum)
    }

    fn plot(&mut self, name: &str, plot: Plot) {
        if self.cfg.output.plots {
            self.plots.push((format!("{name}.svg"), plot.render()));
        }
    }
}

struct TorusRow {
    h: f64,
    eta: f64,
    at_threshold: bool,
    condition: bool,
    lambda_vol: f64,
}

fn torus_large_eigenvalue(ctx: &mut Ctx) -> Result<()> {
    let s = ctx.cfg.torus.clone().expect("validated");
    let tol = ctx.cfg.tolerances.clone();
    let grid = ctx.grid()?;
    let mut cases: Vec<(f64, f64, bool)> = Vec::new();
    if s.baseline {
        cases.push((1.0, 0.0, false));
    }
    for &h in &s.h {
        let mut etas: Vec<(f64, bool)> = s.eta.iter().map(|&e| (e, false)).collect();
        if s.threshold {
            etas.push((threshold_eta(h, 1.0 / h)?, true));
        }
        etas.sort_by(|a, b| a.0.total_cmp(&b.0));
        etas.dedup_by(|a, b| {
            let same = a.0 == b.0;
            b.1 |= same && a.1;
            same
        });
        cases.extend(etas.into_iter().map(|(e, t)| (h, e, t)));
    }
    let mut rows: Vec<TorusRow> = Vec::new();
    let mut baseline = None;
    for (h, eta, at_threshold) in cases {
        let r = 1.0 / h;
        let case = format!("h={h} eta={eta}");
        if eta > s.eta_cap {
            ctx.sink.error(&case, "eta-cap", &format!("eta {eta} exceeds the cap {}", s.eta_cap));
            continue;
        }
        let (a, b) = randers_axis_symbol(h, r, eta)?;
        let condition = large_eigenvalue_condition(h, r, eta)?;
        let outcome = ctx
            .field(&MetricSpec::randers_torus(h, r, eta), &grid)
            .and_then(|field| Ok((ctx.solve(&case, &field, ctx.cfg.k)?, field.total_volume())));
        let (spectrum, vol) = match outcome {
            Ok(v) => v,
            Err(e) => {
                ctx.sink.error(&case, "solve", &e);
                continue;
            }
        };
        let lambda1 = spectrum.eigenvalues[1];
        let oracle = 4.0 * PI * PI * a.min(b);
        let sink = &mut ctx.sink;
        sink.info(&case, "h", h);
        sink.info(&case, "eta", eta);
        sink.info(&case, "A", a);
        sink.info(&case, "B", b);
        sink.info(&case, "threshold_condition", if condition { 1.0 } else { 0.0 });
        sink.info(&case, "lambda1", lambda1);
        sink.info(&case, "oracle_lambda1", oracle);
        sink.info(&case, "lambda1_vol", lambda1 * vol);
        sink.close(&case, "lambda1_oracle_rel_dev", "oracle-equivalence", (lambda1 / oracle - 1.0).abs(), tol.spectral);
        sink.close(&case, "volume_dev", "unit-volume", (vol - 1.0).abs(), tol.pointwise);
        if condition {
            let bound = 4.0 * PI * PI / (r * r);
            sink.check(&case, "lambda1", "torus-large-eigenvalue", lambda1, Some(bound * (1.0 - tol.spectral)), None);
        }
        if h == 1.0 && eta == 0.0 && baseline.is_none() {
            baseline = Some(lambda1 * vol);
            continue;
        }
        rows.push(TorusRow { h, eta, at_threshold, condition, lambda_vol: lambda1 * vol });
    }

    // growth across h at the threshold
    let mut thr: Vec<&TorusRow> = rows.iter().filter(|r| r.at_threshold).collect();
    thr.sort_by(|a, b| a.h.total_cmp(&b.h));
    for w in thr.windows(2) {
        let case = format!("h={}->{}", w[0].h, w[1].h);
        ctx.sink.check(&case, "lambda1_vol_increment", "large-eigenvalue-growth", w[1].lambda_vol - w[0].lambda_vol, Some(f64::MIN_POSITIVE), None);
    }
    if let (Some(base), Some(last)) = (baseline, thr.last()) {
        let case = format!("h={} vs baseline", last.h);
        ctx.sink.info(&case, "baseline_lambda1_vol", base);
        ctx.sink.check(&case, "lambda1_vol_over_baseline", "large-eigenvalue-growth", last.lambda_vol / base, Some(s.growth_factor), None);
    }
    // monotone in η once past the threshold
    for &h in &s.h {
        let mut past: Vec<&TorusRow> = rows.iter().filter(|r| r.h == h && r.condition).collect();
        past.sort_by(|a, b| a.eta.total_cmp(&b.eta));
        for w in past.windows(2) {
            let case = format!("h={h} eta={}->{}", w[0].eta, w[1].eta);
            ctx.sink.check(&case, "lambda1_vol_increment", "eta-monotonicity", w[1].lambda_vol - w[0].lambda_vol, Some(0.0), None);
        }
    }

    let mut p = Plot::new("λ₁·vol at the threshold η", "h", "λ₁·vol");
    p.log_y = true;
    p.series.push(Series::line("threshold", thr.iter().map(|r| (r.h, r.lambda_vol)).collect()));
    if let Some(base) = baseline {
        let xs: Vec<f64> = thr.iter().map(|r| r.h).collect();
        if let (Some(&x0), Some(&x1)) = (xs.first(), xs.last()) {
            p.series.push(Series::line("growth target", vec![(x0, base * s.growth_factor), (x1, base * s.growth_factor)]));
        }
    }
    ctx.plot("torus_growth", p);
    let mut p = Plot::new("λ₁·vol along the η sweep", "η", "λ₁·vol");
    for &h in &s.h {
        let pts = rows.iter().filter(|r| r.h == h).map(|r| (r.eta, r.lambda_vol)).collect();
        p.series.push(Series::line(&format!("h = {h}"), pts));
    }
    ctx.plot("torus_eta_sweep", p);
    Ok(())
}

/// `S` for `λ(F)/λ(F₀)`: the sup of `σ*_F/σ*_{F₀}` times the spread of `μ_F/μ_{F₀}`.
pub fn spectral_ratio_bound(f: &SymbolField, f0: &SymbolField) -> f64 {
    let mut sigma_sup = 0.0f64;
    let (mut mu_lo, mut mu_hi) = (f64::INFINITY, 0.0f64);
    for i in 0..f.grid().len() {
        sigma_sup = sigma_sup.max(f.sigma_star()[i].ratio_bounds(&f0.sigma_star()[i]).1);
        let m = f.mu()[i] / f0.mu()[i];
        mu_lo = mu_lo.min(m);
        mu_hi = mu_hi.max(m);
    }
    sigma_sup * mu_hi / mu_lo
}

fn bilipschitz_check(ctx: &mut Ctx) -> Result<()> {
    let s = ctx.cfg.bilipschitz.clone().expect("validated");
    let tol = ctx.cfg.tolerances.clone();
    let grid = ctx.grid()?;
    let k = ctx.cfg.k;
    let sampling = Sampling::new(s.directions, s.points);
    let mut plot = Plot::new("λ_k(F)/λ_k(F₀)", "k", "ratio");
    plot.log_y = true;
    for MetricPair { name, metric, reference, expected_ratio } in &s.pairs {
        let consts = match MetricConstants::measure(metric, reference, &sampling) {
            Ok(c) => c,
            Err(e) => {
                ctx.sink.error(name, "admissible-pair", &e);
                continue;
            }
        };
        let fields = ctx.field(metric, &grid).and_then(|f| Ok((f, ctx.field(reference, &grid)?)));
        let (f, f0) = match fields {
            Ok(v) => v,
            Err(e) => {
                ctx.sink.error(name, "admissible-pair", &e);
                continue;
            }
        };
        let upper = spectral_ratio_bound(&f, &f0);
        let upper_rev = spectral_ratio_bound(&f0, &f);
        ctx.sink.info(name, "bilipschitz_C", consts.bilipschitz_constant());
        ctx.sink.info(name, "quasireversibility", consts.quasireversibility);
        ctx.sink.info(name, "S", upper);
        ctx.sink.info(name, "S_prime", upper_rev);
        let spectra = ctx.solve(name, &f, k).and_then(|a| Ok((a, ctx.solve(&format!("{name} reference"), &f0, k)?)));
        let (sf, s0) = match spectra {
            Ok(v) => v,
            Err(e) => {
                ctx.sink.error(name, "solve", &e);
                continue;
            }
        };
        let mut pts = Vec::new();
        for i in 1..=k {
            let ratio = sf.eigenvalues[i] / s0.eigenvalues[i];
            let case = format!("{name} k={i}");
            // the bound is attained for constant coefficients; allow rounding
            let slack = 1.0 + tol.exact;
            ctx.sink.check(&case, "lambda_ratio", "bilipschitz-spectral-bound", ratio, Some(1.0 / (upper_rev * slack)), Some(upper * slack));
            if let Some(e) = expected_ratio {
                ctx.sink.close(&case, "lambda_ratio_dev", "scaling-law", (ratio - e).abs() / e, tol.exact);
            }
            pts.push((i as f64, ratio));
        }
        plot.series.push(Series::scatter(name, pts));
        plot.series.push(Series::line(&format!("{name} S"), vec![(1.0, upper), (k as f64, upper)]));
        plot.series.push(Series::line(&format!("{name} 1/S'"), vec![(1.0, 1.0 / upper_rev), (k as f64, 1.0 / upper_rev)]));
    }
    ctx.plot("bilipschitz_ratios", plot);
    Ok(())
}

fn randers_identities(ctx: &mut Ctx) -> Result<()> {
    let s = ctx.cfg.randers.clone().expect("validated");
    let tol = ctx.cfg.tolerances.clone();
    let grid = ctx.grid()?;
    let quad = FiberQuadrature::trapezoid(s.angular_nodes);
    for &eta in &s.angular_eta {
        let case = format!("angular eta={eta}");
        let (cc, cs, ss) = angular_integrals(eta, &quad);
        let (ecc, _, ess) = angular_closed_forms(eta)?;
        ctx.sink.info(&case, "cos2_integral", cc);
        ctx.sink.info(&case, "sin2_integral", ss);
        ctx.sink.close(&case, "cos2_dev", "angular-integrals", (cc - ecc).abs(), tol.pointwise);
        ctx.sink.close(&case, "sin2_dev", "angular-integrals", (ss - ess).abs(), tol.pointwise);
        ctx.sink.close(&case, "cross_term", "angular-integrals", cs.abs(), tol.cross_term);
    }
    for NamedMetric { name, metric } in &s.cases {
        if let Err(e) = randers_case(ctx, name, metric, &grid, &s, &tol) {
            ctx.sink.error(name, "randers-identities", &e);
        }
    }
    Ok(())
}

fn randers_case(
    ctx: &mut Ctx,
    name: &str,
    metric: &MetricSpec,
    grid: &TorusGrid,
    s: &crate::config::RandersSettings,
    tol: &crate::config::Tolerances,
) -> Result<()> {
    let field = ctx.field(metric, grid)?;
    let base = ctx.field(&metric.riemannian_base(), grid)?;
    // (i) volume
    let mu_dev = (0..grid.len()).map(|i| (field.mu()[i] / base.mu()[i] - 1.0).abs()).fold(0.0, f64::max);
    ctx.sink.close(name, "mu_vs_base_max_rel_dev", "randers-volume-identity", mu_dev, tol.pointwise);

    // (iii) energy of trial functions, symbol route against the tangent fiber
    let MetricSpec::Randers { g, rho } = metric else { unreachable!("validated") };
    let quad = FiberQuadrature::trapezoid(s.angular_nodes.max(field.fiber_nodes));
    for &[m, n] in &s.trial_modes {
        let (mut e_sym, mut e_dir, mut worst, mut scale) = (0.0, 0.0, 0.0f64, 0.0f64);
        for idx in 0..grid.len() {
            let p = grid.point(idx);
            let phase = 2.0 * PI * (m as f64 * p.x() + n as f64 * p.y());
            let amp = 2.0 * PI * phase.cos();
            let df = Covector::new(amp * m as f64, amp * n as f64);
            let d_sym = field.sigma_star()[idx].quad(df.arr()) * field.mu()[idx];
            let [rx, ry] = rho.eval(p.x(), p.y());
            let d_dir = energy_density_direct(&g.eval(p.x(), p.y()), Covector::new(rx, ry), df, &quad);
            e_sym += d_sym;
            e_dir += d_dir;
            worst = worst.max((d_sym - d_dir).abs());
            scale = scale.max(d_sym.abs());
        }
        let case = format!("{name} f=sin2pi({m}x+{n}y)");
        let area = grid.cell_area();
        ctx.sink.info(&case, "energy_symbol", e_sym * area);
        ctx.sink.info(&case, "energy_direct", e_dir * area);
        ctx.sink.close(&case, "energy_rel_dev", "randers-energy", (e_sym - e_dir).abs() / e_sym.abs(), tol.energy);
        ctx.sink.close(&case, "density_max_rel_dev", "randers-energy", worst / scale, tol.energy);
    }

    // weighted Laplacian against its pure symbol
    if s.weighted_bound && !metric.is_spatially_constant() {
        let (lo, hi) = field.weight_range();
        let c = hi / lo;
        ctx.sink.info(name, "weight_ratio_C", c);
        let k = ctx.cfg.k;
        let lf = ctx.solve(name, &field, k)?;
        let ls = ctx.solve(&format!("{name} pure symbol"), &field.pure_symbol(), k)?;
        for i in 1..=k {
            let case = format!("{name} k={i}");
            let ratio = lf.eigenvalues[i] / ls.eigenvalues[i];
            let slack = 1.0 + tol.exact;
            ctx.sink.check(&case, "lambda_over_pure_symbol", "weighted-laplacian-bound", ratio, Some(1.0 / (c * slack)), Some(c * slack));
        }
    }

    // Binet–Legendre two-sided bound with the sampled quasireversibility
    if s.binet_legendre_points > 0 {
        let c = quasireversibility(metric, s.binet_legendre_directions.max(16), s.binet_legendre_points)?;
        let bound = (2.0 * c).powi(3);
        let bl_quad = FiberQuadrature::trapezoid(s.angular_nodes);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..s.binet_legendre_points {
            let x: TorusPoint = sampling::point(i);
            let norm = metric.at(x)?;
            let gbl = binet_legendre_at(metric, x, &bl_quad)?;
            for j in 0..s.binet_legendre_directions {
                let v = sampling::direction(j);
                let r = norm.norm(v) / gbl.quad(v.arr()).sqrt();
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        let case = format!("{name} binet-legendre");
        ctx.sink.info(&case, "pairs", (s.binet_legendre_points * s.binet_legendre_directions) as f64);
        ctx.sink.info(&case, "quasireversibility", c);
        ctx.sink.check(&case, "min_F_over_gBL", "binet-legendre-bounds", lo, Some(1.0 / bound), None);
        ctx.sink.check(&case, "max_F_over_gBL", "binet-legendre-bounds", hi, None, Some(bound));
    }
    Ok(())
}

fn conformal_check(ctx: &mut Ctx) -> Result<()> {
    let s = ctx.cfg.conformal.clone().expect("validated");
    let tol = ctx.cfg.tolerances.clone();
    let grid = ctx.grid()?;
    let k = ctx.cfg.k;
    let base = ctx.field(&s.base, &grid)?;
    let base_spec = ctx.solve("base", &base, k)?;
    for factor in &s.factors {
        let name = &factor.name;
        let spec = MetricSpec::conformal(s.base.clone(), factor.f.clone());
        let scratch = match ctx.field(&spec, &grid) {
            Ok(f) => f,
            Err(e) => {
                ctx.sink.error(name, "conformal-symbol", &e);
                continue;
            }
        };
        let f_at = |p: TorusPoint| factor.f.eval(p.x(), p.y());
        let transformed = base.conformally_rescaled(f_at);
        let (mut sigma_dev, mut mu_dev) = (0.0f64, 0.0f64);
        for i in 0..grid.len() {
            let (a, b) = (scratch.sigma_star()[i], transformed.sigma_star()[i]);
            sigma_dev = sigma_dev.max(a.add(&b.scale(-1.0)).norm() / b.norm());
            let e2f = (2.0 * f_at(grid.point(i))).exp();
            mu_dev = mu_dev.max((scratch.mu()[i] / base.mu()[i] - e2f).abs() / e2f);
        }
        ctx.sink.close(name, "sigma_scratch_vs_transform", "conformal-symbol", sigma_dev, tol.pointwise);
        ctx.sink.close(name, "mu_ratio_vs_exp_2f", "conformal-volume", mu_dev, tol.pointwise);
        let spectra = ctx
            .solve(name, &scratch, k)
            .and_then(|a| Ok((a, ctx.solve(&format!("{name} transformed"), &transformed, k)?)));
        let (ls, lt) = match spectra {
            Ok(v) => v,
            Err(e) => {
                ctx.sink.error(name, "solve", &e);
                continue;
            }
        };
        let constant = factor.f.is_constant().then(|| factor.f.eval(0.0, 0.0));
        for i in 1..=k {
            let case = format!("{name} k={i}");
            ctx.sink.info(&case, "lambda", ls.eigenvalues[i]);
            let dev = (ls.eigenvalues[i] / lt.eigenvalues[i] - 1.0).abs();
            ctx.sink.close(&case, "lambda_scratch_vs_transform", "conformal-spectrum", dev, tol.pointwise);
            if let Some(f) = constant {
                let expected = base_spec.eigenvalues[i] * (-2.0 * f).exp();
                ctx.sink.close(&case, "lambda_scaling_dev", "scaling-law", (ls.eigenvalues[i] / expected - 1.0).abs(), tol.exact);
            }
        }
    }
    Ok(())
}

fn convergence(ctx: &mut Ctx) -> Result<()> {
    let s = ctx.cfg.convergence.clone().expect("validated");
    let k = ctx.cfg.k;
    let t = Instant::now();
    let table = convergence_study(&s.metric, &s.grids, k, &ctx.cfg.fiber_rule(), &ctx.cfg.solver_options())?;
    ctx.sink.diagnostics.push(Diagnostics {
        case: "study".into(),
        grid: *s.grids.last().expect("validated"),
        seconds: t.elapsed().as_secs_f64(),
        ..Diagnostics::default()
    });
    for row in &table.rows {
        let case = format!("N={}", row.n);
        for (i, (l, e)) in row.eigenvalues.iter().zip(&row.errors).enumerate() {
            ctx.sink.info(&case, &format!("lambda{}", i + 1), *l);
            ctx.sink.info(&case, &format!("lambda{}_rel_error", i + 1), *e);
        }
    }
    if let Some(o) = &table.oracle {
        for (i, l) in o.iter().enumerate() {
            ctx.sink.info("oracle", &format!("lambda{}", i + 1), *l);
        }
    }
    let [lo, hi] = s.order;
    if table.oracle.is_some() {
        for (w, order) in table.rows.windows(2).zip(&table.orders) {
            ctx.sink.check(&format!("N={}->{}", w[0].n, w[1].n), "lambda1_order", "convergence-order", *order, Some(lo), Some(hi));
        }
    } else {
        for (w, order) in table.rows.windows(3).zip(&table.orders) {
            let case = format!("N={}->{}->{}", w[0].n, w[1].n, w[2].n);
            ctx.sink.info(&case, "lambda1_order", *order);
            let d1 = w[1].eigenvalues[0] - w[0].eigenvalues[0];
            let d2 = w[2].eigenvalues[0] - w[1].eigenvalues[0];
            ctx.sink.check(&case, "lambda1_increment_ratio", "self-convergence", d1.abs() / d2.abs(), Some(1.0), None);
        }
        let first = table.rows[1].eigenvalues[0] - table.rows[0].eigenvalues[0];
        for w in table.rows.windows(2) {
            let d = (w[1].eigenvalues[0] - w[0].eigenvalues[0]) * first.signum();
            ctx.sink.check(&format!("N={}->{}", w[0].n, w[1].n), "lambda1_signed_increment", "self-convergence", d, Some(0.0), None);
        }
    }
    let mut p = Plot::new("λ₁ convergence", "N", if table.oracle.is_some() { "relative error" } else { "λ₁" });
    p.log_x = true;
    if table.oracle.is_some() {
        p.log_y = true;
        p.series.push(Series::line("λ₁ error", table.rows.iter().map(|r| (r.n as f64, r.errors[0])).collect()));
        let r0 = &table.rows[0];
        let ref_pts = table.rows.iter().map(|r| (r.n as f64, r0.errors[0] * (r0.n as f64 / r.n as f64).powi(2))).collect();
        p.series.push(Series::line("slope 2", ref_pts));
    } else {
        p.series.push(Series::line("λ₁", table.rows.iter().map(|r| (r.n as f64, r.eigenvalues[0])).collect()));
    }
    ctx.plot("convergence", p);
    Ok(())
}
