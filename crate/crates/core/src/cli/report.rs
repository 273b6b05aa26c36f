use serde::Serialize;

/// One computed quantity, optionally checked against a golden value.
/// Field order is the serialized key order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRecord {
    pub quantity: String,
    pub value: f64,
    pub inputs: String,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

impl ReportRecord {
    pub fn measured(quantity: impl Into<String>, value: f64, inputs: impl Into<String>, tolerance: f64) -> Self {
        Self { quantity: quantity.into(), value, inputs: inputs.into(), tolerance, expected: None, pass: None }
    }

    pub fn checked(
        quantity: impl Into<String>,
        value: f64,
        expected: f64,
        inputs: impl Into<String>,
        tolerance: f64,
    ) -> Self {
        Self {
            quantity: quantity.into(),
            value,
            inputs: inputs.into(),
            tolerance,
            expected: Some(expected),
            pass: Some((value - expected).abs() <= tolerance),
        }
    }

    pub fn failed(&self) -> bool {
        self.pass == Some(false)
    }
}

pub fn records_to_json(records: &[ReportRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn records_to_csv(records: &[ReportRecord]) -> String {
    let mut out = String::from("quantity,value,expected,tolerance,pass,inputs\n");
    for r in records {
        let expected = r.expected.map(|e| e.to_string()).unwrap_or_default();
        let pass = r.pass.map(|p| p.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            csv_field(&r.quantity),
            r.value,
            expected,
            r.tolerance,
            pass,
            csv_field(&r.inputs)
        ));
    }
    out
}
