//! CSV dumps of operator matrices and spectra, labelled by set elements.

use std::io::Write;

use szt_core::{DenseOperator, SpectrumResult};

/// Header `row,<col labels>`, then one row per row element.
pub fn write_matrix_csv<W: Write>(op: &DenseOperator, w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["row".to_owned()];
    header.extend(op.cols().iter().map(|x| x.to_string()));
    out.write_record(&header)?;
    for (i, x) in op.rows().iter().enumerate() {
        let mut rec = vec![x.to_string()];
        rec.extend((0..op.ncols()).map(|j| op.get(i, j).to_string()));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

/// One row per eigen or singular triple: `index,value,<vector entries>`,
/// with vector entries labelled by the column elements.
pub fn write_spectrum_csv<W: Write>(op: &DenseOperator, spec: &SpectrumResult, w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["index".to_owned(), "value".to_owned()];
    header.extend(op.cols().iter().map(|x| x.to_string()));
    out.write_record(&header)?;
    for (k, (value, v)) in spec.values.iter().zip(&spec.vectors).enumerate() {
        let mut rec = vec![(k + 1).to_string(), value.to_string()];
        rec.extend(v.iter().map(|x| x.to_string()));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}
