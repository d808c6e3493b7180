//! JSON and CSV emission for result types.
//!
//! Field order is fixed by the struct definitions, and every float is
//! rounded to 12 significant digits before printing, so identical inputs
//! give byte-identical output.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format '{other}', expected json or csv")),
        }
    }
}

/// Anything [`emit_report`] can print.
pub trait Report: Serialize {
    fn csv_header() -> &'static str;
    /// One or more CSV data lines, without trailing newlines.
    fn csv_rows(&self) -> Vec<String>;
}

impl<R: Report> Report for Vec<R> {
    fn csv_header() -> &'static str {
        R::csv_header()
    }

    fn csv_rows(&self) -> Vec<String> {
        self.iter().flat_map(R::csv_rows).collect()
    }
}

pub fn emit_report<R: Report>(result: &R, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(result).expect("report types serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from(R::csv_header());
            s.push('\n');
            for row in result.csv_rows() {
                s.push_str(&row);
                s.push('\n');
            }
            s
        }
    }
}

pub mod sig12 {
    use num_complex::Complex64;
    use serde::Serializer;

    /// Rounds to 12 significant digits.
    pub fn round(x: f64) -> f64 {
        if !x.is_finite() || x == 0.0 {
            return x;
        }
        format!("{x:.11e}").parse().expect("formatted float parses")
    }

    /// Shortest text that reads back as [`round`]`(x)`; `-1` prints as `-1.0`.
    pub fn format(x: f64) -> String {
        format!("{:?}", round(x))
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(round(*x))
    }

    pub fn serialize_option<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&round(*v)),
            None => s.serialize_none(),
        }
    }

    pub fn serialize_vec<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(|&x| round(x)))
    }

    pub fn serialize_complex<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Complex", 2)?;
        st.serialize_field("re", &round(z.re))?;
        st.serialize_field("im", &round(z.im))?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        #[serde(serialize_with = "sig12::serialize")]
        value: f64,
        count: u64,
    }

    impl Report for Row {
        fn csv_header() -> &'static str {
            "value,count"
        }
        fn csv_rows(&self) -> Vec<String> {
            vec![format!("{},{}", sig12::format(self.value), self.count)]
        }
    }

    #[test]
    fn twelve_digits() {
        assert_eq!(sig12::round(0.1 + 0.2), 0.3);
        assert_eq!(sig12::format(-1.0), "-1.0");
        assert_eq!(sig12::format(-0.8125000000004), "-0.8125");
        assert_eq!(sig12::format(1.23456789012345e-7), "1.23456789012e-7");
        assert_eq!(sig12::round(0.0), 0.0);
    }

    #[test]
    fn json_and_csv() {
        let r = Row {
            value: -1.0,
            count: 0,
        };
        let json = emit_report(&r, Format::Json);
        assert!(json.contains("\"value\": -1.0"));
        assert!(json.contains("\"count\": 0"));
        let rows = vec![
            Row {
                value: 0.959,
                count: 2,
            },
            Row {
                value: 0.5,
                count: 3,
            },
        ];
        assert_eq!(
            emit_report(&rows, Format::Csv),
            "value,count\n0.959,2\n0.5,3\n"
        );
    }

    #[test]
    fn format_parsing() {
        assert_eq!("CSV".parse::<Format>(), Ok(Format::Csv));
        assert!("xml".parse::<Format>().is_err());
    }
}
