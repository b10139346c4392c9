//! Reading and writing TSP instances.
//!
//! Two input layouts are accepted:
//!
//! ```text
//! 3
//! 1 0.0 0.0
//! 2 3.0 0.0
//! 3 0.0 4.0
//! ```
//!
//! and the node-coordinate section of a TSPLIB file with `EDGE_WEIGHT_TYPE :
//! EUC_2D`. Distances are always real Euclidean (no TSPLIB rounding).

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::discrete::TspInstance;
use crate::error::{Result, StaError};

pub fn parse_instance(path: &Path) -> Result<TspInstance> {
    let text = fs::read_to_string(path)?;
    parse_instance_str(&text, path)
}

/// Parses instance text. `origin` is only used in error messages.
pub fn parse_instance_str(text: &str, origin: &Path) -> Result<TspInstance> {
    let err = |line: usize, message: String| StaError::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };
    let first = text
        .lines()
        .enumerate()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| err(1, "empty instance file".into()))?;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (count, declared_at) = if let Ok(n) = first.1.trim().parse::<usize>() {
        lines.by_ref().find(|(_, l)| !l.is_empty());
        (n, first.0 + 1)
    } else {
        read_tsplib_header(&mut lines, &err)?
    };

    let mut slots: Vec<Option<(f64, f64)>> = vec![None; count];
    let mut seen = 0;
    let mut last_line = declared_at;
    for (no, line) in lines {
        last_line = no;
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(err(
                no,
                format!("expected `id x y`, found {} fields", fields.len()),
            ));
        }
        let id: usize = fields[0]
            .parse()
            .map_err(|_| err(no, format!("invalid id `{}`", fields[0])))?;
        let coord = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(no, format!("invalid coordinate `{s}`")))
        };
        let (x, y) = (coord(fields[1])?, coord(fields[2])?);
        if id == 0 || id > count {
            if seen == count {
                return Err(err(no, format!("more than the declared {count} cities")));
            }
            return Err(err(no, format!("id {id} outside 1..={count}")));
        }
        let slot = &mut slots[id - 1];
        if slot.is_some() {
            return Err(err(no, format!("duplicate id {id}")));
        }
        *slot = Some((x, y));
        seen += 1;
    }
    if seen != count {
        return Err(err(
            last_line,
            format!("declared {count} cities, found {seen}"),
        ));
    }
    let cities = slots.into_iter().flatten().collect();
    TspInstance::new(cities).map_err(|e| err(declared_at, e.to_string()))
}

fn read_tsplib_header<'a, I, F>(lines: &mut I, err: &F) -> Result<(usize, usize)>
where
    I: Iterator<Item = (usize, &'a str)>,
    F: Fn(usize, String) -> StaError,
{
    let mut dimension = None;
    for (no, line) in lines.by_ref() {
        if line.is_empty() {
            continue;
        }
        if line.starts_with("NODE_COORD_SECTION") {
            let n =
                dimension.ok_or_else(|| err(no, "NODE_COORD_SECTION before DIMENSION".into()))?;
            return Ok((n, no));
        }
        let (key, value) = line
            .split_once(':')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| {
                err(
                    no,
                    format!("expected a city count or `KEY : VALUE`, found `{line}`"),
                )
            })?;
        match key {
            "DIMENSION" => {
                dimension = Some(
                    value
                        .parse()
                        .map_err(|_| err(no, format!("invalid DIMENSION `{value}`")))?,
                )
            }
            "EDGE_WEIGHT_TYPE" if value != "EUC_2D" => {
                return Err(err(no, format!("unsupported EDGE_WEIGHT_TYPE `{value}`")))
            }
            "TYPE" if value != "TSP" => return Err(err(no, format!("unsupported TYPE `{value}`"))),
            _ => {}
        }
    }
    Err(err(0, "missing NODE_COORD_SECTION".into()))
}

/// Writes the plain layout. Coordinates use the shortest representation that
/// parses back to the same value.
pub fn write_instance(inst: &TspInstance, path: &Path) -> Result<()> {
    let mut out = fs::File::create(path)?;
    out.write_all(format_instance(inst).as_bytes())?;
    Ok(())
}

pub fn format_instance(inst: &TspInstance) -> String {
    let mut s = format!("{}\n", inst.len());
    for (i, (x, y)) in inst.cities().iter().enumerate() {
        s.push_str(&format!("{} {x} {y}\n", i + 1));
    }
    s
}
