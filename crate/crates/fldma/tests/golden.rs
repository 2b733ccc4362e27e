use std::fs::File;
use std::path::PathBuf;

use fldma::golden::{read_complex, reference_link, reference_symbols, write_complex};
use fldma_core::waveform::analytic_received;
use num_complex::Complex64;

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/reference_link_symbols.csv")
}

/// Set FLDMA_BLESS=1 to regenerate the checked-in file.
#[test]
fn demodulated_symbols_match_golden_file() {
    let fresh: Vec<Complex64> = reference_symbols().unwrap().iter().copied().collect();
    if std::env::var_os("FLDMA_BLESS").is_some() {
        write_complex(File::create(golden_path()).unwrap(), &fresh).unwrap();
    }
    let stored = read_complex(File::open(golden_path()).unwrap()).unwrap();
    assert_eq!(stored.len(), fresh.len());
    for (i, (a, b)) in stored.iter().zip(&fresh).enumerate() {
        assert!((a - b).norm() < 1e-9, "symbol {i}: stored {a}, computed {b}");
    }
}

#[test]
fn golden_file_agrees_with_symbol_model() {
    let link = reference_link().unwrap();
    let model = analytic_received(&link.frame, &link.grid, &link.plan, &link.paths, 0, 1).unwrap();
    let stored = read_complex(File::open(golden_path()).unwrap()).unwrap();
    for (i, (a, b)) in stored.iter().zip(model.iter()).enumerate() {
        assert!((a - b).norm() < 1e-9, "symbol {i}: stored {a}, model {b}");
    }
}

#[test]
fn complex_csv_is_bit_exact() {
    let values = vec![
        Complex64::new(0.1, -1.0 / 3.0),
        Complex64::new(f64::MIN_POSITIVE, 1e300),
        Complex64::new(-0.0, 123456789.123456789),
    ];
    let mut buf = Vec::new();
    write_complex(&mut buf, &values).unwrap();
    let back = read_complex(buf.as_slice()).unwrap();
    assert_eq!(back, values);
}

#[test]
fn out_of_sequence_index_is_rejected() {
    let text = "index,re,im\n0,1,0\n2,0,1\n";
    assert!(read_complex(text.as_bytes()).is_err());
}
