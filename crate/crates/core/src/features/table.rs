use std::io::{Read, Write};

use super::{FeatureError, FeatureVector, FEATURE_COUNT, FEATURE_NAMES};
use crate::Label;

/// One featurized record: a row of the feature CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub id: String,
    pub label: Label,
    pub features: FeatureVector,
}

/// Rounds to 10 significant digits and prints the shortest form that
/// reads back to that rounded value.
pub(crate) fn format_sig10(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.9e}").parse().expect("valid float");
    format!("{rounded}")
}

/// Writes the canonical feature table: 27 feature columns then `id,label`.
/// `provenance` lines are emitted first, each prefixed with `# `.
pub fn write_feature_csv<W: Write>(
    rows: &[FeatureRow],
    provenance: &[String],
    mut out: W,
) -> Result<(), FeatureError> {
    let io = |e: std::io::Error| FeatureError::Io(e.to_string());
    for line in provenance {
        writeln!(out, "# {line}").map_err(io)?;
    }
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| FeatureError::Io(e.to_string());
    let mut header: Vec<&str> = FEATURE_NAMES.to_vec();
    header.extend(["id", "label"]);
    w.write_record(&header).map_err(csv_err)?;
    for row in rows {
        let mut rec: Vec<String> = row.features.values.iter().map(|&v| format_sig10(v)).collect();
        rec.push(row.id.clone());
        rec.push(row.label.as_u8().to_string());
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush().map_err(io)
}

/// Reads a table written by [`write_feature_csv`]. Lines starting with `#`
/// are skipped; columns are located by header name.
pub fn read_feature_csv<R: Read>(input: R) -> Result<Vec<FeatureRow>, FeatureError> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input);
    let fmt = |e: csv::Error| FeatureError::Format(e.to_string());
    let header = rdr.headers().map_err(fmt)?.clone();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| FeatureError::Format(format!("missing column {name}")))
    };
    let feature_cols = FEATURE_NAMES
        .iter()
        .map(|n| col(n))
        .collect::<Result<Vec<_>, _>>()?;
    let (id_col, label_col) = (col("id")?, col("label")?);

    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(fmt)?;
        let bad = |what: &str| FeatureError::Format(format!("row {}: bad {what}", line + 1));
        let mut values = [0.0; FEATURE_COUNT];
        for (k, &c) in feature_cols.iter().enumerate() {
            let v: f64 = rec
                .get(c)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| bad(FEATURE_NAMES[k]))?;
            if !v.is_finite() {
                return Err(bad(FEATURE_NAMES[k]));
            }
            values[k] = v;
        }
        let label = rec
            .get(label_col)
            .and_then(|s| s.trim().parse::<u8>().ok())
            .and_then(|v| Label::try_from(v).ok())
            .ok_or_else(|| bad("label"))?;
        rows.push(FeatureRow {
            id: rec.get(id_col).unwrap_or_default().to_string(),
            label,
            features: FeatureVector::new(values),
        });
    }
    Ok(rows)
}
