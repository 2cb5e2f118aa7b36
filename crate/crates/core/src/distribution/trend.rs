use super::ford::{rho_reference, FordConstants};
use super::report::{DistReport, ReportRow};
use crate::spectrum::ValueSpectrum;
use crate::{Error, Result};

/// `D(x) * 12 / ((k-1) x)` on an ascending grid of positive `x`, each point
/// required to be strictly below the previous one. The first point is
/// compared against the density it would have if every value were attained.
/// With Ford constants configured, `D(x) / (x rho(x))` is attached to each
/// row for inspection.
pub fn density_trend(
    spectrum: &ValueSpectrum,
    grid: &[f64],
    ford: Option<&FordConstants>,
) -> Result<DistReport> {
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidInput("grid must be strictly ascending".into()));
    }
    let km1 = (spectrum.k.get() - 1) as f64;
    let mut report = DistReport::new(format!(
        "attained-value density, {} space, k={}",
        spectrum.space, spectrum.k
    ));
    let mut prev: Option<f64> = None;
    for &x in grid {
        if !(x > 0.0) {
            return Err(Error::Domain(format!("density needs x > 0, got {x}")));
        }
        let d = spectrum.count_distinct(x)?;
        let density = d as f64 * 12.0 / (km1 * x);
        let reference = prev.unwrap_or_else(|| {
            (crate::spectrum::ceiling_for(spectrum.k, x) + 1) as f64 * 12.0 / (km1 * x)
        });
        let pass = if prev.is_some() { density < reference } else { density <= reference };
        let mut row = ReportRow::new("density", x, density, reference, pass)
            .with_note(format!("D = {d}"));
        if let Some(f) = ford {
            if x >= 16.0 {
                let r = rho_reference(x, f)?;
                row = row.with_aux(d as f64 / (x * r.value));
                if r.shape_only {
                    row = row.with_note(format!("D = {d}; shape-only"));
                }
            }
        }
        report.rows.push(row);
        prev = Some(density);
    }
    Ok(report)
}
