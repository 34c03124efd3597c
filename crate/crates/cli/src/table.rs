//! CSV reading and writing with shortest round-trip number formatting.

use std::fmt::Write as _;
use std::path::Path;

use friedel_core::dielectric::PermittivitySample;
use friedel_core::{Method, ProfileParams, RadialProfile};

use crate::CliError;

pub const PROFILE_HEADER: &str = "R,U,method,err_est";
pub const EPS_HEADER: &str = "q,eps,g0_im,rep";

/// Shortest decimal that parses back to the same `f64`.
pub fn number(x: f64) -> String {
    format!("{x:?}")
}

pub fn profile_csv(profile: &RadialProfile) -> String {
    let mut out = String::with_capacity(48 * profile.len());
    out.push_str(PROFILE_HEADER);
    out.push('\n');
    for i in 0..profile.len() {
        let err = profile.diagnostics[i]
            .as_ref()
            .map(|d| number(d.error_estimate))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            number(profile.r_values[i]),
            number(profile.u_values[i]),
            profile.method,
            err
        );
    }
    out
}

pub fn eps_csv(samples: &[PermittivitySample]) -> String {
    let mut out = String::with_capacity(64 * samples.len());
    out.push_str(EPS_HEADER);
    out.push('\n');
    for s in samples {
        let g0_im = s.g0.map(|g| g.im).unwrap_or(0.0);
        let _ = writeln!(
            out,
            "{},{},{},{}",
            number(s.q),
            number(s.eps.re),
            number(g0_im),
            s.representation.as_str()
        );
    }
    out
}

/// Reads a profile written by [`profile_csv`]. Only `R` and `U` are
/// required; the method column, when present, must be uniform.
pub fn parse_profile(text: &str) -> Result<RadialProfile, CliError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| CliError::Usage("empty profile file".into()))?
        .split(',')
        .map(str::trim)
        .collect();
    let col = |name: &str| header.iter().position(|h| *h == name);
    let (ri, ui) = match (col("R"), col("U")) {
        (Some(r), Some(u)) => (r, u),
        _ => {
            return Err(CliError::Usage(format!(
                "profile header must contain R and U, got `{}`",
                header.join(",")
            )))
        }
    };
    let mi = col("method");

    let mut r = Vec::new();
    let mut u = Vec::new();
    let mut method: Option<Method> = None;
    for (n, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let field = |i: usize| {
            fields.get(i).copied().ok_or_else(|| {
                CliError::Usage(format!("row {}: expected {} fields", n + 2, header.len()))
            })
        };
        let value = |i: usize| -> Result<f64, CliError> {
            field(i)?
                .parse::<f64>()
                .map_err(|e| CliError::Usage(format!("row {}: {e}", n + 2)))
        };
        r.push(value(ri)?);
        u.push(value(ui)?);
        if let Some(mi) = mi {
            let m: Method = field(mi)?.parse()?;
            match method {
                None => method = Some(m),
                Some(prev) if prev != m => {
                    return Err(CliError::Usage(format!("row {}: mixed methods", n + 2)))
                }
                _ => {}
            }
        }
    }
    // Model parameters are not stored in the file.
    let params = ProfileParams::new(f64::NAN, f64::NAN);
    Ok(RadialProfile::from_columns(
        r,
        u,
        method.unwrap_or(Method::Numeric),
        params,
    )?)
}

pub fn read_profile(path: &Path) -> Result<RadialProfile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_profile(&text)
}

pub fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use friedel_core::potential::profile;
    use friedel_core::QuadratureSpec;

    #[test]
    fn numbers_round_trip() {
        for x in [
            0.1,
            1.0 / 3.0,
            1e-300,
            6.02e23,
            -2.5e-7,
            15.0,
            f64::MIN_POSITIVE,
        ] {
            assert_eq!(number(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
        assert_eq!(number(15.0), "15.0");
    }

    #[test]
    fn profile_round_trip_is_bit_exact() {
        let grid: Vec<f64> = (0..50).map(|i| 10.0 + 0.2 * i as f64 + 1.0 / 7.0).collect();
        let p = profile(
            &grid,
            Method::Asymptotic,
            ProfileParams::new(1.0, 0.05),
            &QuadratureSpec::default(),
        )
        .unwrap();
        let back = parse_profile(&profile_csv(&p)).unwrap();
        assert_eq!(back.r_values, p.r_values);
        assert_eq!(back.u_values, p.u_values);
        assert_eq!(back.method, Method::Asymptotic);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(parse_profile("").is_err());
        assert!(parse_profile("a,b\n1,2\n").is_err());
        assert!(parse_profile("R,U\n1,x\n").is_err());
        assert!(parse_profile("R,U,method\n1,2,numeric\n2,3,coulomb\n").is_err());
        assert!(parse_profile("R,U\n2,1\n1,1\n").is_err());
    }
}
