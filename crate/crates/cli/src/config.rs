//! key=value configuration files; flag values always win over file values.

use anyhow::{Context, Result};
use std::collections::HashMap;
use std::path::Path;

#[derive(Default, Debug)]
pub struct FileConfig {
    values: HashMap<String, String>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<FileConfig> {
        let mut values = HashMap::new();
        if let Some(p) = path {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("cannot read config {}", p.display()))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line
                    .split_once('=')
                    .with_context(|| format!("{}:{}: expected key=value", p.display(), lineno + 1))?;
                values.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        Ok(FileConfig { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    /// flag.or(config) with parsing.
    pub fn or_parse<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| anyhow::anyhow!("config key {key} = {raw}: {e}")),
        }
    }
}

/// Parse a complex number in "a", "bi", "a+bi" or "a-bi" form.
pub fn parse_complex(s: &str) -> Result<num_complex::Complex64> {
    let t = s.trim().replace(' ', "");
    if t.is_empty() {
        anyhow::bail!("empty complex literal");
    }
    // pure imaginary cases first: "i", "-i", "0.5i"
    if let Some(body) = t.strip_suffix('i') {
        // does the body itself contain a +/- separator after the first char?
        let split = body
            .char_indices()
            .skip(1)
            .find(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i);
        match split {
            None => {
                let im = match body {
                    "" | "+" => 1.0,
                    "-" => -1.0,
                    _ => body.parse::<f64>().map_err(|e| anyhow::anyhow!("bad imaginary part {body}: {e}"))?,
                };
                return Ok(num_complex::Complex64::new(0.0, im));
            }
            Some(i) => {
                let (re, imtail) = body.split_at(i);
                let re: f64 = re.parse().map_err(|e| anyhow::anyhow!("bad real part {re}: {e}"))?;
                let im = match imtail {
                    "+" => 1.0,
                    "-" => -1.0,
                    _ => imtail.parse::<f64>().map_err(|e| anyhow::anyhow!("bad imaginary part {imtail}: {e}"))?,
                };
                return Ok(num_complex::Complex64::new(re, im));
            }
        }
    }
    let re: f64 = t.parse().map_err(|e| anyhow::anyhow!("bad real literal {t}: {e}"))?;
    Ok(num_complex::Complex64::new(re, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("1").unwrap(), num_complex::Complex64::new(1.0, 0.0));
        assert_eq!(parse_complex("-0.5i").unwrap(), num_complex::Complex64::new(0.0, -0.5));
        assert_eq!(parse_complex("0.3+0.2i").unwrap(), num_complex::Complex64::new(0.3, 0.2));
        assert_eq!(parse_complex("0.3-0.2i").unwrap(), num_complex::Complex64::new(0.3, -0.2));
        assert_eq!(parse_complex("i").unwrap(), num_complex::Complex64::new(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), num_complex::Complex64::new(0.0, -1.0));
        assert!(parse_complex("foo").is_err());
    }
}
