//! Golden-vector files: complex sequences stored as `index,re,im` CSV with
//! shortest round-trip float formatting, so a reload is bit-exact.

use std::io::{Read, Write};

use fldma_core::array::{generate_offsets, OffsetPlan, OffsetScheme, OffsetSpacing};
use fldma_core::channel::Path;
use fldma_core::linalg::CVector;
use fldma_core::rng::rng_from_seed;
use fldma_core::waveform::{OfdmGrid, SymbolFrame};
use num_complex::Complex64;

use crate::error::{CliError, Result};

pub fn write_complex<W: Write>(out: W, values: &[Complex64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "re", "im"])?;
    for (i, v) in values.iter().enumerate() {
        w.write_record([i.to_string(), format!("{:?}", v.re), format!("{:?}", v.im)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_complex<R: Read>(input: R) -> Result<Vec<Complex64>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let mut out = Vec::new();
    for (expected, record) in r.records().enumerate() {
        let record = record?;
        let field = |i: usize| -> Result<&str> {
            record
                .get(i)
                .ok_or_else(|| CliError::config(format!("golden row {expected}: missing column {i}")))
        };
        let index: usize = field(0)?
            .parse()
            .map_err(|e| CliError::config(format!("golden row {expected}: {e}")))?;
        if index != expected {
            return Err(CliError::config(format!("golden row {expected}: index {index} out of sequence")));
        }
        let num = |s: &str| -> Result<f64> { s.parse().map_err(|e| CliError::config(format!("golden row {expected}: {e}"))) };
        out.push(Complex64::new(num(field(1)?)?, num(field(2)?)?));
    }
    Ok(out)
}

/// The fixed link used by the checked-in golden vectors: 64 subcarriers,
/// 4 antennas with a random-permutation plan at ρ_max = 0.3, three paths
/// inside the cyclic prefix, 16-QAM symbols from seed 2024.
pub struct ReferenceLink {
    pub grid: OfdmGrid,
    pub plan: OffsetPlan,
    pub frame: SymbolFrame,
    pub paths: Vec<Path>,
}

pub fn reference_link() -> fldma_core::Result<ReferenceLink> {
    let grid = OfdmGrid::new(64, 15e3, 16)?;
    let plan = generate_offsets(
        OffsetScheme::RandomPermutation,
        4,
        OffsetSpacing::MaxRatio {
            rho_max: 0.3,
            subcarrier_spacing: 15e3,
        },
        7,
    )?;
    let mut rng = rng_from_seed(2024);
    let frame = SymbolFrame::random_qam(64, 4, 16, &mut rng)?;
    let paths = vec![
        Path::new(Complex64::new(1.0, 0.0), 1200.0, 0.2, 0.1),
        Path::new(Complex64::new(0.3, -0.4), 2100.5, -0.35, 0.4),
        Path::new(Complex64::new(-0.1, 0.25), 3900.0, 0.7, -0.6),
    ];
    Ok(ReferenceLink { grid, plan, frame, paths })
}

/// Demodulated symbols of the reference link at the single receive antenna.
pub fn reference_symbols() -> fldma_core::Result<CVector> {
    let link = reference_link()?;
    let samples = fldma_core::waveform::synthesize_received(&link.frame, &link.grid, &link.plan, &link.paths, 0, 1)?;
    fldma_core::waveform::matched_filter_demod(&samples, &link.grid)
}
