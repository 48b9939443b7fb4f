//! CSV ingestion: two numeric columns selected by index or header name.

use std::path::Path;

/// A parsed bivariate sample plus provenance for the report.
pub struct Dataset {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub path: String,
    pub col_x: String,
    pub col_y: String,
}

/// Resolve a column selector against an optional header row.
fn resolve(selector: &str, headers: Option<&csv::StringRecord>, width: usize) -> Result<usize, String> {
    if let Some(h) = headers {
        if let Some(pos) = h.iter().position(|name| name == selector) {
            return Ok(pos);
        }
    }
    match selector.parse::<usize>() {
        Ok(i) if i < width => Ok(i),
        Ok(i) => Err(format!("column index {i} out of range (file has {width} columns)")),
        Err(_) => Err(format!("no column named '{selector}'")),
    }
}

/// Load two columns of a CSV file. Errors carry 1-based row numbers
/// (counting the header row when present).
pub fn load_csv(path: &Path, col_x: &str, col_y: &str, header: bool) -> Result<Dataset, String> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(header)
        .flexible(false)
        .from_path(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let headers = if header {
        Some(
            rdr.headers()
                .map_err(|e| format!("bad header row: {e}"))?
                .clone(),
        )
    } else {
        None
    };
    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut ix = None;
    let mut iy = None;
    for (rec_no, rec) in rdr.records().enumerate() {
        let row = rec_no + 1 + header as usize;
        let rec = rec.map_err(|e| format!("row {row}: {e}"))?;
        if ix.is_none() {
            ix = Some(resolve(col_x, headers.as_ref(), rec.len())?);
            iy = Some(resolve(col_y, headers.as_ref(), rec.len())?);
        }
        let parse = |idx: usize| -> Result<f64, String> {
            let cell = rec
                .get(idx)
                .ok_or_else(|| format!("row {row}: missing column {idx}"))?;
            cell.trim()
                .parse::<f64>()
                .map_err(|_| format!("row {row}: '{cell}' is not a number"))
        };
        x.push(parse(ix.unwrap())?);
        y.push(parse(iy.unwrap())?);
    }
    if x.len() < 10 {
        return Err(format!("need at least 10 data rows, got {}", x.len()));
    }
    Ok(Dataset {
        x,
        y,
        path: path.display().to_string(),
        col_x: col_x.to_string(),
        col_y: col_y.to_string(),
    })
}
