//! Tabulated complex permittivity.

use std::f64::consts::PI;
use std::io::{Read, Write};

use num_complex::Complex64;

use super::constants::C;
use crate::error::{Error, Result};

const SILICA_CSV: &str = include_str!("../../data/silica_franta2016.csv");

/// Complex relative permittivity sampled at increasing angular frequencies,
/// linearly interpolated in between.
#[derive(Debug, Clone, PartialEq)]
pub struct PermittivityTable {
    omega: Vec<f64>,
    eps: Vec<Complex64>,
    name: String,
    source: String,
}

impl PermittivityTable {
    /// Build a table from `(omega, eps)` samples in increasing frequency.
    pub fn from_samples(
        name: impl Into<String>,
        source: impl Into<String>,
        samples: impl IntoIterator<Item = (f64, Complex64)>,
    ) -> Result<Self> {
        let (omega, eps): (Vec<f64>, Vec<Complex64>) = samples.into_iter().unzip();
        if omega.is_empty() {
            return Err(Error::Validation("permittivity table is empty".into()));
        }
        for (i, (w, e)) in omega.iter().zip(&eps).enumerate() {
            if !(w.is_finite() && *w > 0.0) {
                return Err(Error::Validation(format!("sample {i}: angular frequency {w} is not positive")));
            }
            if !(e.re.is_finite() && e.im.is_finite()) {
                return Err(Error::Validation(format!("sample {i}: permittivity is not finite")));
            }
            if e.im < 0.0 {
                return Err(Error::Validation(format!("sample {i}: Im eps = {} is negative", e.im)));
            }
        }
        if let Some(i) = omega.windows(2).position(|p| !(p[0] < p[1])) {
            return Err(Error::Validation(format!("angular frequencies not strictly increasing at sample {}", i + 1)));
        }
        Ok(PermittivityTable { omega, eps, name: name.into(), source: source.into() })
    }

    /// Constant permittivity on `[omega_min, omega_max]`.
    pub fn constant(eps: Complex64, omega_min: f64, omega_max: f64) -> Result<Self> {
        PermittivityTable::from_samples(
            format!("constant eps = {eps}"),
            "",
            [(omega_min, eps), (omega_max, eps)],
        )
    }

    /// Vacuum (eps = 1) on `[omega_min, omega_max]`.
    pub fn vacuum(omega_min: f64, omega_max: f64) -> Result<Self> {
        let mut t = PermittivityTable::constant(Complex64::new(1.0, 0.0), omega_min, omega_max)?;
        t.name = "vacuum".into();
        Ok(t)
    }

    /// Room-temperature fused silica shipped with the crate.
    pub fn builtin_silica() -> Self {
        load_nk_table(SILICA_CSV.as_bytes()).expect("bundled silica table is valid")
    }

    /// Raw text of the bundled silica table.
    pub fn builtin_silica_csv() -> &'static str {
        SILICA_CSV
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// Sample frequencies [rad/s].
    pub fn omegas(&self) -> &[f64] {
        &self.omega
    }

    pub fn values(&self) -> &[Complex64] {
        &self.eps
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.omega.iter().copied().zip(self.eps.iter().copied())
    }

    /// `[omega_min, omega_max]` [rad/s].
    pub fn support(&self) -> (f64, f64) {
        (self.omega[0], *self.omega.last().unwrap())
    }

    pub fn contains(&self, omega: f64) -> bool {
        let (lo, hi) = self.support();
        omega >= lo && omega <= hi
    }

    /// Permittivity at `omega`, linear in omega between samples and exact at them.
    pub fn permittivity(&self, omega: f64) -> Result<Complex64> {
        let (lo, hi) = self.support();
        if !(omega >= lo && omega <= hi) {
            return Err(Error::OutOfRange { omega, min: lo, max: hi });
        }
        let i = self.omega.partition_point(|w| *w < omega);
        if self.omega[i] == omega {
            return Ok(self.eps[i]);
        }
        let (w0, w1) = (self.omega[i - 1], self.omega[i]);
        let t = (omega - w0) / (w1 - w0);
        let (e0, e1) = (self.eps[i - 1], self.eps[i]);
        let re = e0.re + t * (e1.re - e0.re);
        let im = (1.0 - t) * e0.im + t * e1.im;
        Ok(Complex64::new(re, im.max(0.0)))
    }

    /// Same table with every value replaced by `f(omega, eps)`.
    pub fn map(&self, name: impl Into<String>, mut f: impl FnMut(f64, Complex64) -> Complex64) -> Result<Self> {
        PermittivityTable::from_samples(name, self.source.clone(), self.samples().map(|(w, e)| (w, f(w, e))))
    }

    /// Write in the `omega_rad_s,eps_re,eps_im` format; reloading gives a
    /// bit-identical table.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# material: {}", self.name)?;
        if !self.source.is_empty() {
            writeln!(out, "# source: {}", self.source)?;
        }
        writeln!(out, "omega_rad_s,eps_re,eps_im")?;
        for (w, e) in self.samples() {
            writeln!(out, "{:e},{:e},{:e}", w, e.re, e.im)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Columns {
    WavelengthNk,
    OmegaEps,
}

/// Parse a CSV table.
///
/// Accepted headers are `lambda_m,n,k` (wavelength in meters, refractive
/// index n + ik, wavelengths strictly monotonic in either direction) and
/// `omega_rad_s,eps_re,eps_im`. Lines starting with `#` are comments;
/// `# material:` and `# source:` comments set the table metadata.
pub fn load_nk_table<R: Read>(mut reader: R) -> Result<PermittivityTable> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;

    let mut name = String::new();
    let mut source = String::new();
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(v) = rest.strip_prefix("material:") {
                name = v.trim().to_string();
            } else if let Some(v) = rest.strip_prefix("source:") {
                source = v.trim().to_string();
            }
        }
    }

    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .has_headers(true)
        .from_reader(text.as_bytes());

    let header_line = rdr.position().line();
    let headers = rdr
        .headers()
        .map_err(|e| Error::Parse { line: header_line.max(1), message: e.to_string() })?
        .clone();
    let header: Vec<&str> = headers.iter().collect();
    let columns = match header.as_slice() {
        ["lambda_m", "n", "k"] => Columns::WavelengthNk,
        ["omega_rad_s", "eps_re", "eps_im"] => Columns::OmegaEps,
        _ => {
            return Err(Error::Parse {
                line: headers.position().map_or(1, |p| p.line()),
                message: format!("expected header `lambda_m,n,k` or `omega_rad_s,eps_re,eps_im`, found `{}`", header.join(",")),
            })
        }
    };

    let mut rows: Vec<(u64, f64, Complex64)> = Vec::new();
    let mut direction = 0.0f64;
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 3 {
            return Err(Error::Parse { line, message: format!("expected 3 fields, found {}", record.len()) });
        }
        let mut v = [0.0; 3];
        for (slot, field) in v.iter_mut().zip(record.iter()) {
            *slot = field
                .parse::<f64>()
                .map_err(|e| Error::Parse { line, message: format!("`{field}`: {e}") })?;
            if !slot.is_finite() {
                return Err(Error::Parse { line, message: format!("non-finite value `{field}`") });
            }
        }
        let (x, eps) = match columns {
            Columns::WavelengthNk => {
                let [lambda, n, k] = v;
                if !(lambda > 0.0) {
                    return Err(Error::Parse { line, message: format!("wavelength {lambda} is not positive") });
                }
                if !(n > 0.0) {
                    return Err(Error::Validation(format!("line {line}: refractive index n = {n} is not positive")));
                }
                if k < 0.0 {
                    return Err(Error::Validation(format!("line {line}: extinction coefficient k = {k} is negative")));
                }
                (lambda, Complex64::new(n, k).powi(2))
            }
            Columns::OmegaEps => {
                let [omega, re, im] = v;
                if !(omega > 0.0) {
                    return Err(Error::Parse { line, message: format!("angular frequency {omega} is not positive") });
                }
                if im < 0.0 {
                    return Err(Error::Validation(format!("line {line}: Im eps = {im} is negative")));
                }
                (omega, Complex64::new(re, im))
            }
        };
        if let Some(&(_, prev, _)) = rows.last() {
            let step = x - prev;
            if step == 0.0 || (direction != 0.0 && step.signum() != direction) {
                return Err(Error::Parse { line, message: "abscissae are duplicated or not strictly monotonic".into() });
            }
            if columns == Columns::OmegaEps && step < 0.0 {
                return Err(Error::Parse { line, message: "angular frequencies must be strictly increasing".into() });
            }
            direction = step.signum();
        }
        rows.push((line, x, eps));
    }
    if rows.is_empty() {
        return Err(Error::Parse { line: header_line.max(1), message: "table has no data rows".into() });
    }

    let mut samples: Vec<(f64, Complex64)> = rows
        .into_iter()
        .map(|(_, x, eps)| match columns {
            Columns::WavelengthNk => (2.0 * PI * C / x, eps),
            Columns::OmegaEps => (x, eps),
        })
        .collect();
    if samples.len() > 1 && samples[0].0 > samples[1].0 {
        samples.reverse();
    }
    PermittivityTable::from_samples(name, source, samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(s: &str) -> Result<PermittivityTable> {
        load_nk_table(s.as_bytes())
    }

    #[test]
    fn vacuum_row() {
        let t = load("lambda_m,n,k\n1e-6,1,0\n").unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.omegas()[0], 2.0 * PI * C * 1e6);
        assert_eq!(t.values()[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn n_equals_k_equals_one_gives_two_i() {
        let t = load("lambda_m,n,k\n3.7e-7,1,1\n").unwrap();
        assert_eq!(t.values()[0], Complex64::new(0.0, 2.0));
    }

    #[test]
    fn rows_are_resorted_by_frequency() {
        let t = load("lambda_m,n,k\n1e-6,1.5,0\n2e-6,1.4,0.1\n4e-6,1.3,0.2\n").unwrap();
        assert!(t.omegas().windows(2).all(|p| p[0] < p[1]));
        assert_eq!(t.values()[0], Complex64::new(1.3, 0.2).powi(2));
        let d = load("lambda_m,n,k\n4e-6,1.3,0.2\n2e-6,1.4,0.1\n1e-6,1.5,0\n").unwrap();
        assert_eq!(t, d);
    }

    #[test]
    fn metadata_comments() {
        let t = load("# material: glass\n# source: somewhere\nlambda_m,n,k\n# inline\n1e-6,1.5,0\n").unwrap();
        assert_eq!(t.name(), "glass");
        assert_eq!(t.source(), "somewhere");
    }

    #[test]
    fn duplicate_wavelength_reports_line() {
        let e = load("lambda_m,n,k\n1e-6,1.5,0\n1e-6,1.5,0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e:?}");
        let e = load("# c\nlambda_m,n,k\n1e-6,1.5,0\n2e-6,1.5,0\n1.5e-6,1.5,0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 5, .. }), "{e:?}");
    }

    #[test]
    fn negative_k_is_a_validation_error() {
        assert!(matches!(load("lambda_m,n,k\n1e-6,1.5,-0.1\n"), Err(Error::Validation(_))));
        assert!(matches!(load("omega_rad_s,eps_re,eps_im\n1e15,2,-1\n"), Err(Error::Validation(_))));
    }

    #[test]
    fn bad_header_and_fields() {
        assert!(matches!(load("wl,n,k\n1,1,1\n"), Err(Error::Parse { .. })));
        assert!(matches!(load("lambda_m,n,k\n1e-6,abc,0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(load("lambda_m,n,k\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn interpolation_exact_at_nodes_and_linear_between() {
        let t = PermittivityTable::from_samples(
            "two",
            "",
            [(1.0, Complex64::new(1.0, 0.0)), (3.0, Complex64::new(3.0, 0.0))],
        )
        .unwrap();
        assert_eq!(t.permittivity(2.0).unwrap(), Complex64::new(2.0, 0.0));
        assert_eq!(t.permittivity(3.0).unwrap(), Complex64::new(3.0, 0.0));
        match t.permittivity(3.5).unwrap_err() {
            Error::OutOfRange { min, max, .. } => assert_eq!((min, max), (1.0, 3.0)),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn builtin_silica_loads() {
        let t = PermittivityTable::builtin_silica();
        assert!(t.len() > 1000);
        assert!(t.name().contains("silica"));
        assert!(t.values().iter().all(|e| e.im >= 0.0));
        for (w, e) in t.samples().step_by(97) {
            assert_eq!(t.permittivity(w).unwrap(), e);
        }
    }

    #[test]
    fn csv_round_trip_is_bit_identical() {
        let t = PermittivityTable::builtin_silica();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let back = load_nk_table(buf.as_slice()).unwrap();
        assert_eq!(t, back);
    }
}
