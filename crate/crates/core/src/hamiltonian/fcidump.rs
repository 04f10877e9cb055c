//! FCIDUMP reader and writer.
//!
//! Files use 1-based orbital indices; records with all four indices zero hold
//! the core energy, records `v i j 0 0` hold one-electron integrals and all
//! other records with positive indices hold `(ij|kl)`. Every two-electron
//! record is expanded to its eight permutation images.

use super::integrals::symmetry_images;
use super::ActiveSpaceHamiltonian;
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

pub fn read_fcidump(path: impl AsRef<Path>) -> Result<ActiveSpaceHamiltonian> {
    let text = std::fs::read_to_string(path)?;
    parse_fcidump(&text)
}

fn header_error(line: usize, message: impl Into<String>) -> Error {
    Error::Fcidump { line, message: message.into() }
}

pub fn parse_fcidump(text: &str) -> Result<ActiveSpaceHamiltonian> {
    let lines: Vec<&str> = text.lines().collect();

    // Namelist: everything from "&FCI" up to "&END" or "/".
    let mut header = String::new();
    let mut body_start = None;
    let mut seen_start = false;
    for (idx, line) in lines.iter().enumerate() {
        let trimmed = line.trim();
        if !seen_start {
            if trimmed.is_empty() {
                continue;
            }
            if !trimmed.to_ascii_uppercase().starts_with("&FCI") {
                return Err(header_error(idx + 1, "expected namelist starting with &FCI"));
            }
            seen_start = true;
            header.push_str(&trimmed[4..]);
            header.push(',');
        } else {
            header.push_str(trimmed);
            header.push(',');
        }
        let upper = trimmed.to_ascii_uppercase();
        if upper.ends_with("&END") || upper.ends_with('/') || upper == "&" {
            body_start = Some(idx + 1);
            break;
        }
    }
    let body_start = body_start.ok_or_else(|| header_error(lines.len(), "unterminated namelist header"))?;

    let header = header.to_ascii_uppercase().replace("&END", "").replace('/', "");
    let fields = parse_namelist(&header).map_err(|m| header_error(body_start, m))?;
    let get_int = |key: &str| -> Result<Option<i64>> {
        match fields.get(key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .next()
                .unwrap_or("")
                .trim()
                .parse::<i64>()
                .map(Some)
                .map_err(|_| header_error(body_start, format!("{key} is not an integer: {v}"))),
        }
    };
    let norb = get_int("NORB")?.ok_or_else(|| header_error(body_start, "missing NORB"))?;
    let nelec = get_int("NELEC")?.ok_or_else(|| header_error(body_start, "missing NELEC"))?;
    let ms2 = get_int("MS2")?.unwrap_or(0);
    if norb <= 0 || norb > 64 {
        return Err(header_error(body_start, format!("NORB={norb} outside 1..=64")));
    }
    if nelec < 0 || (nelec + ms2) % 2 != 0 || ms2.abs() > nelec {
        return Err(header_error(
            body_start,
            format!("inconsistent NELEC={nelec} and MS2={ms2} parity"),
        ));
    }
    let norb = norb as usize;
    let n_alpha = ((nelec + ms2) / 2) as usize;
    let n_beta = ((nelec - ms2) / 2) as usize;
    if n_alpha > norb || n_beta > norb {
        return Err(header_error(body_start, "more electrons of one spin than orbitals"));
    }

    let m = norb;
    let mut h1 = vec![0.0; m * m];
    let mut eri = vec![0.0; m.pow(4)];
    let mut core = 0.0;
    for (idx, line) in lines.iter().enumerate().skip(body_start) {
        let lineno = idx + 1;
        let mut tokens = line.split_whitespace();
        let Some(first) = tokens.next() else { continue };
        let value: f64 = first
            .replace(['D', 'd'], "E")
            .parse()
            .map_err(|_| header_error(lineno, format!("invalid value '{first}'")))?;
        let mut idxs = [0usize; 4];
        for slot in idxs.iter_mut() {
            let tok = tokens.next().ok_or_else(|| header_error(lineno, "expected four indices"))?;
            let v: i64 = tok
                .parse()
                .map_err(|_| header_error(lineno, format!("non-integer index '{tok}'")))?;
            if v < 0 || v as usize > norb {
                return Err(header_error(lineno, format!("index {v} outside [0, {norb}]")));
            }
            *slot = v as usize;
        }
        if tokens.next().is_some() {
            return Err(header_error(lineno, "trailing tokens after four indices"));
        }
        match idxs {
            [0, 0, 0, 0] => core = value,
            [i, j, 0, 0] if i > 0 && j > 0 => {
                h1[(i - 1) * m + (j - 1)] = value;
                h1[(j - 1) * m + (i - 1)] = value;
            }
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                for (a, b, c, d) in symmetry_images(i - 1, j - 1, k - 1, l - 1) {
                    eri[((a * m + b) * m + c) * m + d] = value;
                }
            }
            // orbital energies ("e i 0 0 0") and other auxiliary records
            [_, 0, 0, 0] => {}
            _ => return Err(header_error(lineno, format!("unsupported index pattern {idxs:?}"))),
        }
    }
    ActiveSpaceHamiltonian::new(norb, n_alpha, n_beta, core, h1, eri)
}

fn parse_namelist(header: &str) -> std::result::Result<HashMap<String, String>, String> {
    // KEY=value[,value...] pairs; list values run until the next KEY=.
    let mut out = HashMap::new();
    let mut key: Option<String> = None;
    let mut value = String::new();
    for raw in header.split(',') {
        let tok = raw.trim();
        if tok.is_empty() {
            continue;
        }
        if let Some((k, v)) = tok.split_once('=') {
            if let Some(prev) = key.take() {
                out.insert(prev, value.trim_end_matches(',').to_string());
            }
            key = Some(k.trim().to_string());
            value = v.trim().to_string();
        } else if key.is_some() {
            value.push(',');
            value.push_str(tok);
        } else {
            return Err(format!("unexpected token '{tok}' in namelist"));
        }
    }
    if let Some(prev) = key {
        out.insert(prev, value);
    }
    Ok(out)
}

/// Serialize to FCIDUMP text. Values are printed in shortest round-trip form so
/// that parsing the output reproduces every integral bit-for-bit.
pub fn write_fcidump(ham: &ActiveSpaceHamiltonian) -> String {
    let m = ham.norb();
    let nelec = ham.n_alpha() + ham.n_beta();
    let ms2 = ham.n_alpha() as i64 - ham.n_beta() as i64;
    let mut out = String::new();
    let _ = writeln!(out, " &FCI NORB={m},NELEC={nelec},MS2={ms2},");
    let _ = writeln!(out, "  ORBSYM={}", vec!["1"; m].join(","));
    let _ = writeln!(out, "  ISYM=1,");
    let _ = writeln!(out, " &END");
    for p in 0..m {
        for q in 0..=p {
            for r in 0..m {
                for s in 0..=r {
                    if p * (p + 1) / 2 + q < r * (r + 1) / 2 + s {
                        continue;
                    }
                    let v = ham.eri(p, q, r, s);
                    if v != 0.0 {
                        let _ = writeln!(out, "{v:e} {} {} {} {}", p + 1, q + 1, r + 1, s + 1);
                    }
                }
            }
        }
    }
    for p in 0..m {
        for q in 0..=p {
            let v = ham.h1(p, q);
            if v != 0.0 {
                let _ = writeln!(out, "{v:e} {} {} 0 0", p + 1, q + 1);
            }
        }
    }
    let _ = writeln!(out, "{:e} 0 0 0 0", ham.core_energy());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE_ORBITAL: &str = " &FCI NORB=1,NELEC=2,MS2=0,\n  ORBSYM=1,\n  ISYM=1,\n &END\n  0.5 1 1 1 1\n -1.0 1 1 0 0\n  0.3 0 0 0 0\n";

    #[test]
    fn single_orbital_header_and_values() {
        let h = parse_fcidump(ONE_ORBITAL).unwrap();
        assert_eq!((h.norb(), h.n_alpha(), h.n_beta()), (1, 1, 1));
        assert_eq!(h.core_energy(), 0.3);
        assert_eq!(h.h1(0, 0), -1.0);
        assert_eq!(h.eri(0, 0, 0, 0), 0.5);
    }

    #[test]
    fn symmetry_fill_from_single_record() {
        let text = "&FCI NORB=2, NELEC=2, MS2=0 &END\n 0.25 2 1 1 1\n";
        let h = parse_fcidump(text).unwrap();
        assert_eq!(h.eri(0, 0, 1, 0), 0.25);
        assert_eq!(h.eri(1, 0, 0, 0), 0.25);
        assert_eq!(h.eri(0, 1, 0, 0), 0.25);
        assert_eq!(h.eri(0, 0, 0, 1), 0.25);
        assert_eq!(h.eri(1, 1, 0, 0), 0.0);
    }

    #[test]
    fn open_shell_counts() {
        let text = "&FCI NORB=3,NELEC=3,MS2=1,\n/\n";
        let h = parse_fcidump(text).unwrap();
        assert_eq!((h.n_alpha(), h.n_beta()), (2, 1));
    }

    fn line_of(err: Error) -> usize {
        match err {
            Error::Fcidump { line, .. } => line,
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(line_of(parse_fcidump("NORB=2\n").unwrap_err()), 1);
        let bad_index = "&FCI NORB=2,NELEC=2,MS2=0,\n&END\n1.0 1 1 0 0\n1.0 1 x 0 0\n";
        assert_eq!(line_of(parse_fcidump(bad_index).unwrap_err()), 4);
        let out_of_range = "&FCI NORB=2,NELEC=2,MS2=0,\n&END\n1.0 3 1 0 0\n";
        assert_eq!(line_of(parse_fcidump(out_of_range).unwrap_err()), 3);
        let parity = "&FCI NORB=2,NELEC=3,MS2=0,\n&END\n";
        assert!(matches!(parse_fcidump(parity), Err(Error::Fcidump { .. })));
        let missing = "&FCI NELEC=2,MS2=0,\n&END\n";
        assert!(matches!(parse_fcidump(missing), Err(Error::Fcidump { .. })));
        assert!(matches!(parse_fcidump("&FCI NORB=2,NELEC=2\n"), Err(Error::Fcidump { .. })));
    }

    #[test]
    fn writer_round_trip_is_bit_exact() {
        let text = "&FCI NORB=2,NELEC=2,MS2=0,\n&END\n0.6757101548035163 1 1 1 1\n0.1809311997842314 2 1 2 1\n0.6645817302552969 1 1 2 2\n0.1 2 2 2 2\n-1.25633907300325 1 1 0 0\n-0.47189600728114 2 2 0 0\n0.1234567890123 2 1 0 0\n0.7199689944489797 0 0 0 0\n";
        let h = parse_fcidump(text).unwrap();
        let again = parse_fcidump(&write_fcidump(&h)).unwrap();
        assert_eq!(h, again);
    }
}
