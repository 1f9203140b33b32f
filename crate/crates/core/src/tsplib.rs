//! Reader and writer for TSPLIB `EUC_2D` instances.
//!
//! Only what the benchmarks need is supported: a `key: value` header followed
//! by a `NODE_COORD_SECTION` of `<index> <x> <y>` lines. A small `TOUR_SECTION`
//! reader is included for loading known optimal tours.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::problems::TspInstance;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeWeightType {
    Euc2d,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TsplibHeader {
    pub name: String,
    pub dimension: usize,
    pub edge_weight_type: EdgeWeightType,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("missing DIMENSION header")]
    MissingDimension,
    #[error("missing EDGE_WEIGHT_TYPE header")]
    MissingEdgeWeightType,
    #[error("line {line}: unsupported EDGE_WEIGHT_TYPE `{value}` (only EUC_2D)")]
    UnsupportedEdgeWeightType { line: usize, value: String },
    #[error("line {line}: unsupported TYPE `{value}`")]
    UnsupportedType { line: usize, value: String },
    #[error("line {line}: invalid DIMENSION `{value}`")]
    InvalidDimension { line: usize, value: String },
    #[error("missing {0}")]
    MissingSection(&'static str),
    #[error("line {line}: malformed coordinate line `{content}`")]
    MalformedCoordinate { line: usize, content: String },
    #[error("line {line}: malformed tour entry `{content}`")]
    MalformedTour { line: usize, content: String },
    #[error("expected {expected} entries, found {found}")]
    CountMismatch { expected: usize, found: usize },
}

/// Splits a header line into key and value. `NAME: x`, `NAME : x` and
/// `NAME x` are all accepted.
fn split_header(line: &str) -> (&str, &str) {
    match line.split_once(':') {
        Some((key, value)) => (key.trim(), value.trim()),
        None => {
            let line = line.trim();
            match line.split_once(char::is_whitespace) {
                Some((key, value)) => (key, value.trim()),
                None => (line, ""),
            }
        }
    }
}

fn starts_keyword(line: &str) -> bool {
    line.trim_start()
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic())
}

struct Header {
    name: Option<String>,
    dimension: Option<usize>,
    edge_weight_type: Option<EdgeWeightType>,
}

/// Reads header lines until `section` and returns the header plus the
/// 0-based index of the first line after the section keyword.
fn read_header(
    lines: &[&str],
    section: &'static str,
    accepted_type: &str,
) -> Result<(Header, usize), ParseError> {
    let mut header = Header {
        name: None,
        dimension: None,
        edge_weight_type: None,
    };
    for (i, raw) in lines.iter().enumerate() {
        let line_no = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let (key, value) = split_header(raw);
        match key {
            k if k == section => return Ok((header, i + 1)),
            "NAME" => header.name = Some(value.to_string()),
            "TYPE" => {
                if value != accepted_type {
                    return Err(ParseError::UnsupportedType {
                        line: line_no,
                        value: value.to_string(),
                    });
                }
            }
            "DIMENSION" => {
                let dim = value
                    .parse::<usize>()
                    .ok()
                    .filter(|&d| d > 0)
                    .ok_or_else(|| ParseError::InvalidDimension {
                        line: line_no,
                        value: value.to_string(),
                    })?;
                header.dimension = Some(dim);
            }
            "EDGE_WEIGHT_TYPE" => {
                if value != "EUC_2D" {
                    return Err(ParseError::UnsupportedEdgeWeightType {
                        line: line_no,
                        value: value.to_string(),
                    });
                }
                header.edge_weight_type = Some(EdgeWeightType::Euc2d);
            }
            "EOF" => break,
            // COMMENT and anything unknown.
            _ => {}
        }
    }
    Err(ParseError::MissingSection(section))
}

/// Parses an `EUC_2D` instance. Coordinates are placed by their 1-based
/// index, so lines may come in any order.
pub fn parse_tsplib(text: &str) -> Result<TspInstance, ParseError> {
    parse_with_header(text).map(|(_, instance)| instance)
}

pub fn parse_with_header(text: &str) -> Result<(TsplibHeader, TspInstance), ParseError> {
    let lines: Vec<&str> = text.lines().collect();
    let (header, start) = read_header(&lines, "NODE_COORD_SECTION", "TSP")?;
    let dimension = header.dimension.ok_or(ParseError::MissingDimension)?;
    let edge_weight_type = header
        .edge_weight_type
        .ok_or(ParseError::MissingEdgeWeightType)?;

    let mut cities: Vec<Option<(f64, f64)>> = vec![None; dimension];
    let mut found = 0;
    for (i, raw) in lines.iter().enumerate().skip(start) {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if starts_keyword(line) {
            break;
        }
        let malformed = || ParseError::MalformedCoordinate {
            line: i + 1,
            content: line.to_string(),
        };
        let mut fields = line.split_whitespace();
        let (Some(index), Some(x), Some(y), None) =
            (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(malformed());
        };
        let index: usize = index.parse().map_err(|_| malformed())?;
        let x: f64 = x.parse().map_err(|_| malformed())?;
        let y: f64 = y.parse().map_err(|_| malformed())?;
        if !x.is_finite() || !y.is_finite() {
            return Err(malformed());
        }
        found += 1;
        if found > dimension {
            return Err(ParseError::CountMismatch {
                expected: dimension,
                found,
            });
        }
        // Out-of-range or repeated index.
        if index == 0 || index > dimension || cities[index - 1].replace((x, y)).is_some() {
            return Err(malformed());
        }
    }
    if found != dimension {
        return Err(ParseError::CountMismatch {
            expected: dimension,
            found,
        });
    }
    let name = header.name.unwrap_or_else(|| "unnamed".to_string());
    let cities: Vec<(f64, f64)> = cities.into_iter().flatten().collect();
    Ok((
        TsplibHeader {
            name: name.clone(),
            dimension,
            edge_weight_type,
        },
        TspInstance::new(name, cities),
    ))
}

pub fn read_tsplib(path: impl AsRef<Path>) -> Result<TspInstance> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_tsplib(&text).map_err(Error::from)
}

/// Parses a `TOUR_SECTION` file into a 0-based visiting order.
pub fn parse_tour(text: &str) -> Result<Vec<usize>, ParseError> {
    let lines: Vec<&str> = text.lines().collect();
    let (header, start) = read_header(&lines, "TOUR_SECTION", "TOUR")?;
    let mut tour = Vec::new();
    'lines: for (i, raw) in lines.iter().enumerate().skip(start) {
        if starts_keyword(raw) {
            break;
        }
        for token in raw.split_whitespace() {
            if token == "-1" {
                break 'lines;
            }
            match token.parse::<usize>() {
                Ok(city) if city > 0 => tour.push(city - 1),
                _ => {
                    return Err(ParseError::MalformedTour {
                        line: i + 1,
                        content: raw.trim().to_string(),
                    })
                }
            }
        }
    }
    if let Some(dim) = header.dimension {
        if dim != tour.len() {
            return Err(ParseError::CountMismatch {
                expected: dim,
                found: tour.len(),
            });
        }
    }
    Ok(tour)
}

/// Writes an instance back out. Coordinates use shortest round-trip
/// formatting, so parsing the output reproduces the instance exactly.
pub fn to_tsplib_string(instance: &TspInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NAME : {}", instance.name);
    let _ = writeln!(out, "TYPE : TSP");
    let _ = writeln!(out, "DIMENSION : {}", instance.dimension());
    let _ = writeln!(out, "EDGE_WEIGHT_TYPE : EUC_2D");
    let _ = writeln!(out, "NODE_COORD_SECTION");
    for (i, (x, y)) in instance.cities.iter().enumerate() {
        let _ = writeln!(out, "{} {x:?} {y:?}", i + 1);
    }
    out.push_str("EOF\n");
    out
}

pub(crate) fn fnv1a(bytes: impl IntoIterator<Item = u8>) -> u64 {
    bytes.into_iter().fold(0xcbf2_9ce4_8422_2325, |hash, b| {
        (hash ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// FNV-1a over the dimension and coordinate bit patterns.
pub fn instance_checksum(instance: &TspInstance) -> u64 {
    let coords = instance
        .cities
        .iter()
        .flat_map(|&(x, y)| [x.to_bits(), y.to_bits()]);
    fnv1a(
        std::iter::once(instance.dimension() as u64)
            .chain(coords)
            .flat_map(u64::to_le_bytes),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = "NAME: tiny\nCOMMENT : three cities\nTYPE: TSP\nDIMENSION:3\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2   3.5 0\n3\t0 4\nEOF\n";

    #[test]
    fn parses_minimal_file() {
        let (header, inst) = parse_with_header(TINY).unwrap();
        assert_eq!(header.name, "tiny");
        assert_eq!(header.dimension, 3);
        assert_eq!(inst.cities, vec![(0.0, 0.0), (3.5, 0.0), (0.0, 4.0)]);
    }

    #[test]
    fn accepts_blank_line_terminator_and_no_eof() {
        let text = TINY.replace("EOF\n", "\n\n");
        assert_eq!(parse_tsplib(&text).unwrap().dimension(), 3);
        let text = TINY.replace("EOF\n", "");
        assert_eq!(parse_tsplib(&text).unwrap().dimension(), 3);
    }

    #[test]
    fn rejects_geo() {
        let text = TINY.replace("EUC_2D", "GEO");
        assert!(matches!(
            parse_tsplib(&text),
            Err(ParseError::UnsupportedEdgeWeightType { line: 5, .. })
        ));
    }

    #[test]
    fn distinct_errors() {
        let no_dim = TINY.replace("DIMENSION:3\n", "");
        assert_eq!(parse_tsplib(&no_dim), Err(ParseError::MissingDimension));

        let short = TINY.replace("DIMENSION:3", "DIMENSION:4");
        assert_eq!(
            parse_tsplib(&short),
            Err(ParseError::CountMismatch { expected: 4, found: 3 })
        );

        let bad = TINY.replace("2   3.5 0", "2 3.5 zero");
        assert!(matches!(
            parse_tsplib(&bad),
            Err(ParseError::MalformedCoordinate { line: 8, .. })
        ));

        let no_section = TINY.replace("NODE_COORD_SECTION", "DISPLAY_DATA_SECTION");
        assert_eq!(
            parse_tsplib(&no_section),
            Err(ParseError::MissingSection("NODE_COORD_SECTION"))
        );
    }

    #[test]
    fn checksum_tracks_content() {
        let a = parse_tsplib(TINY).unwrap();
        let b = parse_tsplib(TINY).unwrap();
        assert_eq!(instance_checksum(&a), instance_checksum(&b));
        let moved = parse_tsplib(&TINY.replace("3.5 0", "3.5 0.001")).unwrap();
        assert_ne!(instance_checksum(&a), instance_checksum(&moved));
    }

    #[test]
    fn tour_reader() {
        let text = "NAME : t\nTYPE : TOUR\nDIMENSION : 3\nTOUR_SECTION\n1\n3\n2\n-1\nEOF\n";
        assert_eq!(parse_tour(text).unwrap(), vec![0, 2, 1]);
    }
}
