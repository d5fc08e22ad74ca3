//! Flooding complex, its persistence and the critical nodes it reveals.

mod complex;
mod events;
mod persistence;

use std::io::Write;

pub use complex::{
    build_flooding_complex, build_flooding_complex_on, ComplexSize, FiltrationComplex, Simplex, DEFAULT_SIMPLEX_CAP,
};
pub use events::{
    classify_critical, classify_higher, critical_analysis, denoise, level_barcode, Cause, CriticalEvent,
    LevelPersistence, MergedMinimum,
};
pub use persistence::{compute_persistence, Barcode, Interval};

use crate::report::format_real;

/// Writes a barcode as CSV with header
/// `dim,birth_t,death_t,birth_h,death_h,birth_node,killer_node`.
/// Essential classes leave the death columns empty.
pub fn write_barcode_csv<W: Write>(w: W, b: &Barcode, labels: &[String]) -> csv::Result<()> {
    let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    out.write_record(["dim", "birth_t", "death_t", "birth_h", "death_h", "birth_node", "killer_node"])?;
    for i in &b.intervals {
        out.write_record([
            i.dim.to_string(),
            i.birth.to_string(),
            i.death.map(|d| d.to_string()).unwrap_or_default(),
            format_real(i.birth_h),
            i.death_h.map(format_real).unwrap_or_default(),
            labels[i.birth_node].clone(),
            i.killer.map(|k| labels[k].clone()).unwrap_or_default(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
