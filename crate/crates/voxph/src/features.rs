//! Feature CSV: `id,label,<feature names...>`, one row per volume.

use std::io::{Read, Write};

use crate::Error;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureTable {
    pub names: Vec<String>,
    pub ids: Vec<String>,
    pub labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl FeatureTable {
    pub fn new(names: Vec<String>) -> Self {
        Self {
            names,
            ..Self::default()
        }
    }

    pub fn push(&mut self, id: String, label: String, row: Vec<f64>) {
        assert_eq!(row.len(), self.names.len(), "row width must match the header");
        self.ids.push(id);
        self.labels.push(label);
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Values use Rust's shortest round-trip formatting, so reading the file
    /// back gives the same bits.
    pub fn write<W: Write>(&self, out: W) -> Result<(), Error> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["id", "label"].into_iter().chain(self.names.iter().map(String::as_str)))?;
        for ((id, label), row) in self.ids.iter().zip(&self.labels).zip(&self.rows) {
            let mut record = Vec::with_capacity(row.len() + 2);
            record.push(id.clone());
            record.push(label.clone());
            record.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&record)?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV is UTF-8")
    }

    pub fn read<R: Read>(input: R) -> Result<Self, Error> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
        let header = r.headers()?.clone();
        if header.len() < 2 || &header[0] != "id" || &header[1] != "label" {
            return Err(Error::Invalid("feature CSV must start with columns id,label".into()));
        }
        let mut table = Self::new(header.iter().skip(2).map(String::from).collect());
        for (line, record) in r.records().enumerate() {
            let record = record?;
            let row = record
                .iter()
                .skip(2)
                .map(|v| v.parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Error::Invalid(format!("feature CSV row {}: {e}", line + 1)))?;
            table.push(record[0].to_string(), record[1].to_string(), row);
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let mut t = FeatureTable::new(vec!["s0_001".into(), "s0_002".into()]);
        t.push("a".into(), "NC".into(), vec![0.1 + 0.2, 3.0]);
        t.push("b".into(), "AD".into(), vec![1e-300, -0.0]);
        let text = t.to_csv_string();
        assert!(text.starts_with("id,label,s0_001,s0_002\na,NC,0.30000000000000004,3\n"));
        let back = FeatureTable::read(text.as_bytes()).unwrap();
        assert_eq!(back.rows[0][0].to_bits(), (0.1f64 + 0.2).to_bits());
        assert_eq!(back, t);
    }

    #[test]
    fn header_only() {
        let t = FeatureTable::new(vec!["b0_001".into()]);
        assert_eq!(t.to_csv_string(), "id,label,b0_001\n");
        assert!(FeatureTable::read("id,label,b0_001\n".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_values() {
        assert!(FeatureTable::read("id,label,x\na,NC,zz\n".as_bytes()).is_err());
        assert!(FeatureTable::read("name,x\n".as_bytes()).is_err());
    }
}
