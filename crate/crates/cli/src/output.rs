use serde_json::{Map, Value};

/// Where reports go: plain text, or one JSON object per line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub struct Out {
    format: Format,
}

impl Out {
    pub fn new(format: Format) -> Out {
        Out { format }
    }

    /// Emits one record. `fields` must be a JSON object; `text` is printed as is in
    /// text mode and skipped when empty.
    pub fn emit(&self, record: &str, fields: Value, text: impl AsRef<str>) {
        match self.format {
            Format::Text => {
                let text = text.as_ref();
                if !text.is_empty() {
                    println!("{}", text.trim_end_matches('\n'));
                }
            }
            Format::Json => {
                let mut obj = Map::new();
                obj.insert("format_version".into(), Value::from(msml::FORMAT_VERSION));
                obj.insert("record".into(), Value::from(record));
                if let Value::Object(extra) = fields {
                    obj.extend(extra);
                }
                println!("{}", Value::Object(obj));
            }
        }
    }

    pub fn error(&self, msg: &str) {
        match self.format {
            Format::Text => eprintln!("error: {msg}"),
            Format::Json => self.emit("error", serde_json::json!({ "message": msg }), ""),
        }
    }
}
