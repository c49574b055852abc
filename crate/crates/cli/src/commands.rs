//! The five subcommands.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::Vector3;
use serde_json::{json, Value};
use thermal_decoherence::geometry::{DepolarizationMode, EllipsoidShape, Orientation};
use thermal_decoherence::large_particle::{fresnel, LargeParticle, SurfaceEmissivity};
use thermal_decoherence::material::constants::{AMU, C, HBAR};
use thermal_decoherence::material::{load_nk_table, PermittivityTable};
use thermal_decoherence::numerics::SpectralSettings;
use thermal_decoherence::rotor::{
    coherence_decay_rate, propagate, rotor_observables, wavepacket_superposition, LindbladGenerator,
    PropagationSettings, MAX_STEP_RATE,
};
use thermal_decoherence::small_particle::{ComplexRate, SmallParticle};

use crate::config::Settings;
use crate::output::{num, open_output, provenance, sha256_hex, write_csv, write_json, Format};
use crate::CliError;

const DEFAULT_DENSITY: f64 = 2200.0;
const BUILTIN_SILICA: &str = "builtin:silica";

/// Warnings that `--strict` escalates; notes are only printed.
#[derive(Default)]
struct Diagnostics {
    warnings: Vec<String>,
    notes: Vec<String>,
}

impl Diagnostics {
    fn absorb(&mut self, lines: Vec<String>) {
        for line in lines {
            if line.starts_with("note:") {
                if !self.notes.contains(&line) {
                    self.notes.push(line);
                }
            } else {
                self.warn(line);
            }
        }
    }

    fn warn(&mut self, line: impl Into<String>) {
        let line = line.into();
        if !self.warnings.contains(&line) {
            self.warnings.push(line);
        }
    }

    fn all(&self) -> Vec<String> {
        self.warnings.iter().chain(&self.notes).cloned().collect()
    }

    fn finish(self) -> Vec<String> {
        for line in &self.notes {
            eprintln!("{line}");
        }
        for line in &self.warnings {
            if line.starts_with("WARNING") {
                eprintln!("{line}");
            } else {
                eprintln!("WARNING: {line}");
            }
        }
        self.warnings
    }
}

struct Material {
    table: PermittivityTable,
    sha256: String,
}

fn material(s: &Settings) -> Result<Material, CliError> {
    match s.str("material").unwrap_or(BUILTIN_SILICA) {
        BUILTIN_SILICA => Ok(Material {
            table: PermittivityTable::builtin_silica(),
            sha256: sha256_hex(PermittivityTable::builtin_silica_csv().as_bytes()),
        }),
        path => {
            let bytes = std::fs::read(path).map_err(|e| CliError::Config(format!("cannot read material {path}: {e}")))?;
            let table = load_nk_table(bytes.as_slice()).map_err(|e| CliError::Config(format!("material {path}: {e}")))?;
            Ok(Material { table, sha256: sha256_hex(&bytes) })
        }
    }
}

fn temperature(s: &Settings) -> Result<f64, CliError> {
    s.positive("temp")?.ok_or_else(|| CliError::Config("temperature (--temp) is required".into()))
}

fn required(s: &Settings, key: &str) -> Result<f64, CliError> {
    s.positive(key)?.ok_or_else(|| CliError::Config(format!("--{key} is required for this shape")))
}

/// Semi-axes from the shape keys, mass from `mass-amu` or `density`.
fn shape(s: &Settings) -> Result<EllipsoidShape, CliError> {
    let mass = s.positive("mass-amu")?.map(|m| m * AMU);
    let density = s.positive("density")?;
    let kind = s.str("shape").unwrap_or("sphere");
    let axes = match kind {
        "sphere" => s.positive("diameter")?.map(|d| Vector3::repeat(d / 2.0)),
        "spheroid" => Some(Vector3::new(required(s, "l-perp")?, required(s, "l-perp")?, required(s, "l-par")?)),
        "ellipsoid" => {
            let a = s.vector("axes")?.ok_or_else(|| CliError::Config("--axes is required for an ellipsoid".into()))?;
            Some(a)
        }
        other => return Err(CliError::Config(format!("shape must be sphere, spheroid or ellipsoid, got `{other}`"))),
    };
    let shape = match (axes, mass, density) {
        (Some(_), Some(_), Some(_)) => {
            return Err(CliError::Config("size, mass and density together overdetermine the body".into()))
        }
        (Some(l), Some(m), None) => EllipsoidShape::new(l[0], l[1], l[2], m),
        (Some(l), None, rho) => EllipsoidShape::with_density(l[0], l[1], l[2], rho.unwrap_or(DEFAULT_DENSITY)),
        (None, Some(m), rho) => {
            let rho = rho.unwrap_or(DEFAULT_DENSITY);
            EllipsoidShape::sphere((3.0 * m / (4.0 * PI * rho)).cbrt(), m)
        }
        (None, None, _) => {
            return Err(CliError::Config("a sphere needs --diameter or --mass-amu".into()));
        }
    };
    Ok(shape?)
}

fn depolarization(s: &Settings) -> Result<DepolarizationMode, CliError> {
    match s.str("depolarization").unwrap_or("exact") {
        "exact" => Ok(DepolarizationMode::Exact),
        "approximate" => Ok(DepolarizationMode::Approximate),
        other => Err(CliError::Config(format!("depolarization must be exact or approximate, got `{other}`"))),
    }
}

fn spectral_settings(s: &Settings) -> Result<SpectralSettings, CliError> {
    Ok(match s.positive("tol")? {
        Some(tol) => SpectralSettings::with_tolerance(tol),
        None => SpectralSettings::default(),
    })
}

fn small_particle(s: &Settings, mat: &Material, diag: &mut Diagnostics) -> Result<SmallParticle, CliError> {
    let particle = SmallParticle::with_settings(
        shape(s)?,
        mat.table.clone(),
        temperature(s)?,
        depolarization(s)?,
        spectral_settings(s)?,
    )?;
    diag.absorb(particle.warnings());
    check_small(&particle, diag);
    Ok(particle)
}

/// The point-dipole treatment needs the body well below the thermal wavelength.
fn check_small(particle: &SmallParticle, diag: &mut Diagnostics) {
    let wavelength = 2.0 * PI * C / particle.window().peak_omega;
    let largest = particle.shape().semi_axes().max();
    if largest > 0.1 * wavelength {
        diag.warn(format!(
            "largest semi-axis {largest:.3e} m exceeds 10% of the thermal wavelength {wavelength:.3e} m; small-particle limit questionable"
        ));
    }
}

/// Evaluate `f` over `items` on all cores, keeping the input order.
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(items.len().max(1));
    let chunk = items.len().div_ceil(workers).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| scope.spawn(|| c.iter().map(&f).collect::<Vec<_>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

struct Grid {
    thetas: Vec<f64>,
    dxs: Vec<f64>,
    axis: Vector3<f64>,
}

impl Grid {
    fn from_settings(s: &Settings, required: bool) -> Result<Option<Grid>, CliError> {
        let (thetas, dxs) = (s.grid("thetas")?, s.grid("dx")?);
        if !required && thetas.is_none() && dxs.is_none() {
            return Ok(None);
        }
        let thetas = thetas.unwrap_or_else(|| vec![0.0]);
        let dxs = dxs.unwrap_or_else(|| vec![0.0]);
        if let Some(t) = thetas.iter().find(|t| !(0.0..=2.0 * PI + 1e-12).contains(*t)) {
            return Err(CliError::Config(format!("rotation angle {t} outside [0, 2π]")));
        }
        if let Some(d) = dxs.iter().find(|d| **d < 0.0) {
            return Err(CliError::Config(format!("displacement {d} is negative")));
        }
        let axis = s.direction("axis")?.unwrap_or_else(Vector3::z);
        Ok(Some(Grid { thetas, dxs, axis }))
    }

    fn cells(&self) -> Vec<(f64, f64)> {
        self.thetas.iter().flat_map(|&t| self.dxs.iter().map(move |&d| (t, d))).collect()
    }

    /// R = 𝟙, R′ a rotation by θ about the axis, ΔX = dx along the axis.
    fn evaluate(
        &self,
        rate: impl Fn(&Orientation, &Orientation, &Vector3<f64>) -> thermal_decoherence::Result<ComplexRate> + Sync,
    ) -> Result<Vec<(f64, f64, ComplexRate)>, CliError> {
        let cells = self.cells();
        let identity = Orientation::identity();
        let results = par_map(&cells, |&(theta, dx)| {
            let rp = Orientation::from_axis_angle(&self.axis, theta)?;
            rate(&identity, &rp, &(self.axis * dx))
        });
        cells.into_iter().zip(results).map(|((t, d), r)| Ok((t, d, r?))).collect()
    }
}

fn grid_rows(cells: &[(f64, f64, ComplexRate)]) -> Vec<Vec<String>> {
    cells.iter().map(|(t, d, f)| vec![num(*t), num(*d), num(f.re), num(f.im)]).collect()
}

fn grid_json(cells: &[(f64, f64, ComplexRate)]) -> Value {
    json!(cells
        .iter()
        .map(|(t, d, f)| json!({"theta_rad": t, "dx_m": d, "F_re_1_s": f.re, "F_im_1_s": f.im}))
        .collect::<Vec<_>>())
}

const GRID_HEADER: [&str; 4] = ["theta_rad", "dx_m", "F_re_1_s", "F_im_1_s"];

fn shape_json(shape: &EllipsoidShape) -> Value {
    json!({
        "semi_axes_m": shape.semi_axes().as_slice(),
        "mass_kg": shape.mass(),
        "equivalent_radius_m": shape.equivalent_radius(),
    })
}

pub fn emission_rate(s: &Settings) -> Result<Vec<String>, CliError> {
    let format = Format::from_settings(s)?;
    let mat = material(s)?;
    let mut diag = Diagnostics::default();
    let particle = small_particle(s, &mat, &mut diag)?;
    let total = particle.total_emission_rate()?;
    if !total.converged {
        return Err(CliError::Numeric(format!("emission rate did not converge (error estimate {:e})", total.error)));
    }
    let axes = particle.axis_rates()?;
    let spectrum = particle.spectral_table()?;
    eprintln!("total photon emission rate {:.6e} 1/s (error estimate {:.1e})", total.value, total.error);

    let mut out = open_output(s)?;
    match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = spectrum.pairs.iter().map(|(w, g)| vec![num(*w), num(*g)]).collect();
            write_csv(&mut out, &["omega_rad_s", "gamma_ph_s_per_rad_s"], &rows)?;
        }
        Format::Json => {
            let mut doc = provenance("emission-rate", s, Some(&mat.sha256));
            doc.insert("tolerance".into(), json!(particle.settings().rel_tol));
            doc.insert("shape".into(), shape_json(particle.shape()));
            doc.insert(
                "results".into(),
                json!({
                    "total_emission_rate_1_s": total.value,
                    "error_estimate_1_s": total.error,
                    "axis_rates_1_s": axes.gamma.as_slice(),
                    "thermal_peak_rad_s": particle.window().peak_omega,
                    "spectrum": spectrum.pairs.iter().map(|(w, g)| json!([w, g])).collect::<Vec<_>>(),
                }),
            );
            write_json(&mut out, doc, &diag.all())?;
        }
    }
    out.flush()?;
    Ok(diag.finish())
}

pub fn decoherence_map(s: &Settings) -> Result<Vec<String>, CliError> {
    let format = Format::from_settings(s)?;
    let mat = material(s)?;
    let mut diag = Diagnostics::default();
    let particle = small_particle(s, &mat, &mut diag)?;
    let grid = Grid::from_settings(s, true)?.expect("grid is required");
    let cells = grid.evaluate(|r, rp, dx| particle.localization_rate_full(r, rp, dx))?;

    let mut out = open_output(s)?;
    match format {
        Format::Csv => write_csv(&mut out, &GRID_HEADER, &grid_rows(&cells))?,
        Format::Json => {
            let mut doc = provenance("decoherence-map", s, Some(&mat.sha256));
            doc.insert("tolerance".into(), json!(particle.settings().rel_tol));
            doc.insert("shape".into(), shape_json(particle.shape()));
            doc.insert(
                "results".into(),
                json!({
                    "total_emission_rate_1_s": particle.total_emission_rate()?.value,
                    "axis": grid.axis.as_slice(),
                    "grid": grid_json(&cells),
                }),
            );
            write_json(&mut out, doc, &diag.all())?;
        }
    }
    out.flush()?;
    Ok(diag.finish())
}

pub fn heating_curves(s: &Settings) -> Result<Vec<String>, CliError> {
    let format = Format::from_settings(s)?;
    let mat = material(s)?;
    let mut diag = Diagnostics::default();
    let mut s0 = s.clone();
    if s.str("temp").is_none() {
        if let Some(t) = s.grid("temps")? {
            s0.set("temp", Some(&t[0].to_string()));
        }
    }
    let base = small_particle(&s0, &mat, &mut diag)?;
    let trap = s.positive("trap-freq-hz")?;

    let (column, points, particles): (&str, Vec<f64>, Vec<SmallParticle>) = match (s.grid("temps")?, s.grid("aspects")?) {
        (Some(_), Some(_)) => return Err(CliError::Config("give either --temps or --aspects, not both".into())),
        (Some(temps), None) => {
            let ps = temps.iter().map(|&t| base.at_temperature(t)).collect::<Result<Vec<_>, _>>()?;
            ("T_K", temps, ps)
        }
        (None, Some(aspects)) => {
            let l_bar = base.shape().equivalent_radius();
            let mut ps = Vec::new();
            for &a in &aspects {
                if !(a > 0.0 && a.is_finite()) {
                    return Err(CliError::Config(format!("aspect ratio must be positive, got {a}")));
                }
                let shape = EllipsoidShape::spheroid(l_bar * a.powf(2.0 / 3.0), l_bar * a.powf(-1.0 / 3.0), base.shape().mass())?;
                ps.push(base.with_shape(shape)?);
            }
            ("aspect", aspects, ps)
        }
        (None, None) => ("T_K", vec![base.temperature()], vec![base.clone()]),
    };
    for p in &particles {
        diag.absorb(p.warnings());
        check_small(p, &mut diag);
    }
    let heating = par_map(&particles, |p| p.heating_rates());

    let l = base.shape().semi_axes();
    let symmetric = l[0] == l[1] || column == "aspect";
    let labels: Vec<(usize, &str)> =
        if symmetric { vec![(2, "parallel"), (0, "perpendicular")] } else { vec![(0, "axis1"), (1, "axis2"), (2, "axis3")] };

    let mut header = vec![column, "axis_label", "h_cm_W", "hrot_scaled_W_m2"];
    if trap.is_some() {
        header.extend(["h_cm_phonons_s", "h_rot_phonons_s"]);
    }
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for ((x, p), h) in points.iter().zip(&particles).zip(heating) {
        let h = h?;
        let l_bar = p.shape().equivalent_radius();
        for &(i, label) in &labels {
            let scaled = l_bar * l_bar * h.h_rot[i];
            let mut row = vec![num(*x), label.to_string(), num(h.h_cm[i]), num(scaled)];
            let mut rec = json!({column: x, "axis_label": label, "h_cm_W": h.h_cm[i], "hrot_scaled_W_m2": scaled, "h_rot_W": h.h_rot[i]});
            if let Some(f) = trap {
                let quantum = HBAR * 2.0 * PI * f;
                row.extend([num(h.h_cm[i] / quantum), num(h.h_rot[i] / quantum)]);
                rec["h_cm_phonons_s"] = json!(h.h_cm[i] / quantum);
                rec["h_rot_phonons_s"] = json!(h.h_rot[i] / quantum);
            }
            rows.push(row);
            records.push(rec);
        }
    }

    let mut out = open_output(s)?;
    match format {
        Format::Csv => write_csv(&mut out, &header, &rows)?,
        Format::Json => {
            let mut doc = provenance("heating-curves", s, Some(&mat.sha256));
            doc.insert("tolerance".into(), json!(base.settings().rel_tol));
            doc.insert("shape".into(), shape_json(base.shape()));
            doc.insert("results".into(), json!(records));
            write_json(&mut out, doc, &diag.all())?;
        }
    }
    out.flush()?;
    Ok(diag.finish())
}

pub fn large_particle(s: &Settings) -> Result<Vec<String>, CliError> {
    let format = Format::from_settings(s)?;
    let shape = shape(s)?;
    let l = shape.semi_axes();
    if l[0] != l[1] {
        return Err(CliError::Config("the surface tiling needs a sphere or spheroid".into()));
    }
    let t = temperature(s)?;
    let (emissivity, sha) = match s.str("emissivity").unwrap_or("material") {
        "material" => {
            let mat = material(s)?;
            (SurfaceEmissivity::Dielectric(mat.table), Some(mat.sha256))
        }
        "black-body" => (SurfaceEmissivity::BlackBody, None),
        other => return Err(CliError::Config(format!("emissivity must be material or black-body, got `{other}`"))),
    };
    let polar = s.usize("surface-polar")?.unwrap_or(24);
    let azimuth = s.usize("surface-azimuth")?.unwrap_or(16);
    let body = LargeParticle::spheroid(&shape, emissivity, t, polar, azimuth)?.with_settings(spectral_settings(s)?)?;

    let mut diag = Diagnostics::default();
    diag.absorb(body.warnings());
    let report = body.diagnostics()?;
    if report.size_over_wavelength() < 10.0 {
        diag.warn(format!(
            "size / thermal wavelength = {:.3} is below 10; large-particle limit questionable",
            report.size_over_wavelength()
        ));
    }
    if report.min_radius < report.thermal_wavelength {
        diag.warn(format!(
            "smallest radius {:.3e} m is below the thermal wavelength {:.3e} m",
            report.min_radius, report.thermal_wavelength
        ));
    }
    if let Some(len) = report.absorption_length {
        if len > report.size {
            diag.warn(format!("absorption length {len:.3e} m exceeds the body size {:.3e} m; surface emission assumes an opaque body", report.size));
        }
    }
    let peak = body.window().peak_omega;
    let reflectance = match body.emissivity() {
        SurfaceEmissivity::BlackBody => None,
        SurfaceEmissivity::Dielectric(table) => {
            let (lo, hi) = table.support();
            let eps = table.permittivity(peak.clamp(lo, hi))?;
            Some(fresnel(&Vector3::z(), &Vector3::z(), eps, peak)?.r_s)
        }
    };

    let total = body.total_emission_rate()?;
    if !total.converged {
        return Err(CliError::Numeric(format!("emission rate did not converge (error estimate {:e})", total.error)));
    }
    let heating = body.heating_rates()?;
    let grid = Grid::from_settings(s, false)?;
    let cells = match &grid {
        Some(g) => Some(g.evaluate(|r, rp, dx| body.well_oriented_rate(r, rp, dx))?),
        None => None,
    };

    eprintln!("total photon emission rate {:.6e} 1/s", total.value);
    eprintln!("{report}");
    if let Some(r) = reflectance {
        eprintln!("normal reflectance at peak {r:.6}");
    }

    let mut summary = vec![
        ("total_emission_rate", total.value, "1/s"),
        ("h_cm_1", heating.h_cm[0], "W"),
        ("h_cm_2", heating.h_cm[1], "W"),
        ("h_cm_3", heating.h_cm[2], "W"),
        ("h_rot_1", heating.h_rot[0], "W"),
        ("h_rot_2", heating.h_rot[1], "W"),
        ("h_rot_3", heating.h_rot[2], "W"),
        ("size", report.size, "m"),
        ("thermal_wavelength", report.thermal_wavelength, "m"),
        ("min_radius", report.min_radius, "m"),
    ];
    if let Some(len) = report.absorption_length {
        summary.push(("absorption_length", len, "m"));
    }
    if let Some(r) = reflectance {
        summary.push(("normal_reflectance_at_peak", r, "1"));
    }

    let mut out = open_output(s)?;
    match format {
        Format::Csv => match &cells {
            Some(cells) => write_csv(&mut out, &GRID_HEADER, &grid_rows(cells))?,
            None => {
                let rows: Vec<Vec<String>> =
                    summary.iter().map(|(k, v, u)| vec![k.to_string(), num(*v), u.to_string()]).collect();
                write_csv(&mut out, &["quantity", "value", "unit"], &rows)?;
            }
        },
        Format::Json => {
            let mut doc = provenance("large-particle", s, sha.as_deref());
            doc.insert("tolerance".into(), json!(spectral_settings(s)?.rel_tol));
            doc.insert("shape".into(), shape_json(&shape));
            let mut results = serde_json::Map::new();
            for (k, v, _) in &summary {
                results.insert(k.to_string(), json!(v));
            }
            if let Some(cells) = &cells {
                results.insert("grid".into(), grid_json(cells));
            }
            doc.insert("results".into(), Value::Object(results));
            write_json(&mut out, doc, &diag.all())?;
        }
    }
    out.flush()?;
    Ok(diag.finish())
}

fn entries(s: &Settings) -> Result<Vec<(usize, usize)>, CliError> {
    let Some(text) = s.str("entries") else { return Ok(Vec::new()) };
    text.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|pair| {
            let bad = || CliError::Config(format!("entries: expected i:j, got `{pair}`"));
            let (i, j) = pair.split_once(':').ok_or_else(bad)?;
            Ok((i.trim().parse().map_err(|_| bad())?, j.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}

pub fn rotor_sim(s: &Settings) -> Result<Vec<String>, CliError> {
    let format = Format::from_settings(s)?;
    let l_max = s.usize("lmax")?.unwrap_or(20);
    let kappa = s.positive("kappa")?.unwrap_or(40.0);
    let m = s.direction("m")?.unwrap_or_else(Vector3::z);
    let mp = s.direction("m-prime")?.unwrap_or_else(Vector3::x);
    let b = s.f64("rotation-constant")?.unwrap_or(0.0);
    let mut diag = Diagnostics::default();

    let (gamma, analytic, sha) = match s.positive("gamma-or")? {
        Some(g) => (g, g * (1.0 - m.dot(&mp)), None),
        None => {
            let mat = material(s)?;
            let particle = small_particle(s, &mat, &mut diag)?;
            let gamma = particle.rotor_rate()?;
            let analytic = particle.linear_rotor_rate(&m, &mp, &Vector3::zeros())?.re;
            (gamma, analytic, Some(mat.sha256))
        }
    };
    if gamma == 0.0 {
        return Err(CliError::Numeric("orientational decoherence rate vanishes".into()));
    }
    let generator = LindbladGenerator::new(l_max, gamma)?.with_rotation_constant(b)?;
    let entries = entries(s)?;
    let dim = generator.basis().dim();
    if let Some((i, j)) = entries.iter().find(|(i, j)| *i >= dim || *j >= dim) {
        return Err(CliError::Config(format!("entry {i}:{j} outside the basis of dimension {dim}")));
    }
    let t_final = match s.positive("t-final")? {
        Some(t) => t,
        None => 2.0 / (gamma * (1.0 - m.dot(&mp)).max(1.0)),
    };
    let dt = s.positive("dt")?.unwrap_or(0.5 * MAX_STEP_RATE / generator.stiffness());
    let record_every = s.usize("record-every")?.unwrap_or(4);
    let rho0 = wavepacket_superposition(&generator.basis(), &m, &mp, kappa)?;
    let trajectory = propagate(&rho0, &generator, &PropagationSettings::new(t_final, dt).record_every(record_every))?;
    let fit = coherence_decay_rate(&trajectory, &m, &mp)?;

    let basis = generator.basis();
    let last = trajectory.len() - 1;
    let t_end = trajectory.times()[last];
    let jsq0 = rotor_observables(&basis, trajectory.matrix(0)).j_squared;
    let jsq1 = rotor_observables(&basis, trajectory.matrix(last)).j_squared;
    let slope = (jsq1 - jsq0) / t_end;
    let leakage = trajectory.leakage()[last];
    if leakage > 0.01 {
        diag.warn(format!("leakage through the top shell reached {:.2}%; increase --lmax", 100.0 * leakage));
    }
    let rel_err = (analytic != 0.0).then(|| fit.rate / analytic - 1.0);

    eprintln!("orientational rate {gamma:.6e} 1/s");
    eprintln!("fitted coherence decay {:.6e} 1/s, analytic {analytic:.6e} 1/s", fit.rate);
    match rel_err {
        Some(e) => eprintln!("relative error {e:+.4e}"),
        None => eprintln!("fitted rate / orientational rate {:.4e}", fit.rate / gamma),
    }
    eprintln!("d<J^2>/dt / (2 hbar^2 rate) = {:.6}", slope / (2.0 * gamma));
    eprintln!("final leakage {leakage:.3e}");

    let mut out = open_output(s)?;
    match format {
        Format::Csv => trajectory.write_csv(&mut out, &entries)?,
        Format::Json => {
            let mut doc = provenance("rotor-sim", s, sha.as_deref());
            doc.insert(
                "results".into(),
                json!({
                    "gamma_or_1_s": gamma,
                    "fitted_rate_1_s": fit.rate,
                    "analytic_rate_1_s": analytic,
                    "relative_error": rel_err,
                    "fit_residual_rms": fit.residual_rms,
                    "jsq_slope_over_2gamma": slope / (2.0 * gamma),
                    "final_leakage": leakage,
                    "times_s": trajectory.times(),
                    "visibilities": fit.visibilities,
                }),
            );
            write_json(&mut out, doc, &diag.all())?;
        }
    }
    out.flush()?;
    Ok(diag.finish())
}
