//! Ray spec lines: `RAY start=<n> shift=<s> period=+<off>:<local>,...
//! [prefix=<v>,...]`.

use crate::graph::VertexId;
use crate::pgraph::RaySpec;

use super::{content_lines, ParseError};

pub fn parse_ray_line(lineno: usize, line: &str) -> Result<RaySpec, ParseError> {
    let mut parts = line.split_whitespace();
    if parts.next() != Some("RAY") {
        return Err(ParseError::new(lineno, "expected RAY"));
    }
    let mut start = None;
    let mut shift = None;
    let mut period = None;
    let mut prefix = Vec::new();
    for tok in parts {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| ParseError::new(lineno, format!("expected key=value, got `{tok}`")))?;
        match key {
            "start" => {
                start = Some(value.parse().map_err(|_| {
                    ParseError::new(lineno, format!("bad start `{value}`"))
                })?)
            }
            "shift" => {
                shift = Some(value.parse().map_err(|_| {
                    ParseError::new(lineno, format!("bad shift `{value}`"))
                })?)
            }
            "period" => {
                let mut entries = Vec::new();
                for item in value.split(',') {
                    let item = item
                        .strip_prefix('+')
                        .ok_or_else(|| ParseError::new(lineno, "period entry needs +off:local"))?;
                    let (off, local) = item
                        .split_once(':')
                        .ok_or_else(|| ParseError::new(lineno, "period entry needs +off:local"))?;
                    entries.push((
                        off.parse()
                            .map_err(|_| ParseError::new(lineno, "bad period offset"))?,
                        local
                            .parse()
                            .map_err(|_| ParseError::new(lineno, "bad period local"))?,
                    ));
                }
                period = Some(entries);
            }
            "prefix" => {
                for item in value.split(',') {
                    prefix.push(
                        item.parse::<VertexId>()
                            .map_err(|e| ParseError::new(lineno, e))?,
                    );
                }
            }
            other => return Err(ParseError::new(lineno, format!("unknown key `{other}`"))),
        }
    }
    Ok(RaySpec {
        prefix,
        start: start.ok_or_else(|| ParseError::new(lineno, "missing start"))?,
        period: period.ok_or_else(|| ParseError::new(lineno, "missing period"))?,
        shift: shift.ok_or_else(|| ParseError::new(lineno, "missing shift"))?,
    })
}

pub fn parse_rays(text: &str) -> Result<Vec<RaySpec>, ParseError> {
    content_lines(text)
        .map(|(lineno, line)| parse_ray_line(lineno, line))
        .collect()
}

pub fn write_ray(r: &RaySpec) -> String {
    let period = r
        .period
        .iter()
        .map(|(o, l)| format!("+{o}:{l}"))
        .collect::<Vec<_>>()
        .join(",");
    let mut s = format!("RAY start={} shift={} period={}", r.start, r.shift, period);
    if !r.prefix.is_empty() {
        let p = r
            .prefix
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",");
        s.push_str(&format!(" prefix={p}"));
    }
    s
}

pub fn write_rays(rays: &[RaySpec]) -> String {
    rays.iter()
        .map(write_ray)
        .map(|l| l + "\n")
        .collect::<String>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let r = RaySpec {
            prefix: vec![VertexId::Base(0), VertexId::Unit(0, 3)],
            start: 1,
            period: vec![(0, 3), (1, 2)],
            shift: 2,
        };
        let line = write_ray(&r);
        let back = parse_ray_line(1, &line).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn rejects_junk() {
        assert!(parse_ray_line(1, "RAY start=1").is_err());
        assert!(parse_ray_line(1, "RAY start=x shift=1 period=+0:0").is_err());
        assert!(parse_ray_line(1, "start=1 shift=1 period=+0:0").is_err());
    }
}
