//! Plain-text matrix dumps.
//!
//! ```text
//! wires: A_I:2,A_O:2
//! 1.0000000000000000e0+0.0000000000000000e0j 0.0000000000000000e0+0.0000000000000000e0j ...
//! ```
//!
//! One row per line, entries `re±imj` with 17 significant digits. Process
//! files prepend a `parties:` line; instrument files start with an
//! `instrument:` line followed by one `outcome: k` block per outcome.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::instruments::Instrument;
use crate::processes::{PartySlot, ProcessMatrix};
use crate::tensor::{CMatrix, LabeledOperator, WireLabel};

pub fn format_entry(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.16e}{}{:.16e}j", z.re, sign, z.im.abs())
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_entry(s: &str, line: usize) -> Result<Complex64> {
    let body = s
        .strip_suffix('j')
        .ok_or_else(|| perr(line, format!("entry `{s}` lacks trailing j")))?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(|| perr(line, format!("entry `{s}` has no imaginary part")))?;
    let re: f64 = body[..split]
        .parse()
        .map_err(|_| perr(line, format!("bad real part in `{s}`")))?;
    let im: f64 = body[split..]
        .parse()
        .map_err(|_| perr(line, format!("bad imaginary part in `{s}`")))?;
    Ok(Complex64::new(re, im))
}

pub fn wires_header(wires: &[WireLabel]) -> String {
    let ws: Vec<String> = wires.iter().map(|w| w.to_string()).collect();
    format!("wires: {}", ws.join(","))
}

fn parse_wire_list(s: &str, line: usize) -> Result<Vec<WireLabel>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|item| {
            let (name, dim) = item
                .trim()
                .rsplit_once(':')
                .ok_or_else(|| perr(line, format!("wire `{item}` lacks :dim")))?;
            let dim: usize = dim
                .parse()
                .map_err(|_| perr(line, format!("bad dimension in `{item}`")))?;
            Ok(WireLabel::new(name, dim))
        })
        .collect()
}

pub fn write_operator(op: &LabeledOperator) -> String {
    let mut out = wires_header(op.wires());
    out.push('\n');
    let m = op.data();
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|col| format_entry(m[(r, col)]))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Reads one operator starting at `lines[start]`; returns it and the index
/// of the next unread line.
fn read_operator(lines: &[&str], start: usize) -> Result<(LabeledOperator, usize)> {
    let header = lines
        .get(start)
        .ok_or_else(|| perr(start + 1, "missing wires header"))?;
    let rest = header
        .strip_prefix("wires:")
        .ok_or_else(|| perr(start + 1, "expected `wires:` header"))?;
    let wires = parse_wire_list(rest.trim(), start + 1)?;
    let n: usize = wires.iter().map(|w| w.dim).product();
    let mut data = CMatrix::zeros(n, n);
    for r in 0..n {
        let lineno = start + 2 + r;
        let line = lines
            .get(start + 1 + r)
            .ok_or_else(|| perr(lineno, "missing matrix row"))?;
        let entries: Vec<&str> = line.split(' ').filter(|s| !s.is_empty()).collect();
        if entries.len() != n {
            return Err(perr(
                lineno,
                format!("expected {n} entries, found {}", entries.len()),
            ));
        }
        for (col, e) in entries.iter().enumerate() {
            data[(r, col)] = parse_entry(e, lineno)?;
        }
    }
    let op = LabeledOperator::new(wires, data).map_err(|e| perr(start + 1, e.to_string()))?;
    Ok((op, start + 1 + n))
}

fn content_lines(text: &str) -> Vec<&str> {
    text.lines().map(str::trim_end).collect()
}

pub fn parse_operator(text: &str) -> Result<LabeledOperator> {
    let lines = content_lines(text);
    Ok(read_operator(&lines, 0)?.0)
}

pub fn write_process(w: &ProcessMatrix) -> String {
    format!("{}\n{}", w.parties_header(), write_operator(w.op()))
}

fn parse_slot(spec: &str, line: usize) -> Result<PartySlot> {
    let (name, body) = spec
        .split_once('=')
        .ok_or_else(|| perr(line, format!("slot `{spec}` lacks `=`")))?;
    let body = body
        .trim()
        .strip_prefix('(')
        .and_then(|b| b.strip_suffix(')'))
        .ok_or_else(|| perr(line, format!("slot `{spec}` needs parentheses")))?;
    let (io, anc) = match body.split_once('|') {
        Some((io, anc)) => (io, Some(anc)),
        None => (body, None),
    };
    let (input, output) = io
        .split_once(',')
        .ok_or_else(|| perr(line, format!("slot `{spec}` needs input,output")))?;
    let mut slot = PartySlot::new(name.trim(), input.trim(), output.trim());
    if let Some(anc) = anc {
        slot.ancillas = anc.split(',').map(|s| s.trim().to_string()).collect();
    }
    Ok(slot)
}

pub fn parse_process(text: &str) -> Result<ProcessMatrix> {
    let lines = content_lines(text);
    let header = lines.first().ok_or_else(|| perr(1, "empty file"))?;
    let body = header
        .strip_prefix("parties:")
        .ok_or_else(|| perr(1, "expected `parties:` header"))?;
    let slots = body
        .trim()
        .split(';')
        .map(|s| parse_slot(s.trim(), 1))
        .collect::<Result<Vec<_>>>()?;
    let (op, _) = read_operator(&lines, 1)?;
    ProcessMatrix::new(op, slots)
}

pub fn write_instrument(ins: &Instrument) -> String {
    let mut out = ins.header();
    out.push('\n');
    for (k, m) in ins.outcomes.iter().enumerate() {
        out.push_str(&format!("outcome: {k}\n"));
        out.push_str(&write_operator(m));
    }
    out
}

pub fn parse_instrument(text: &str) -> Result<Instrument> {
    let lines = content_lines(text);
    let header = lines.first().ok_or_else(|| perr(1, "empty file"))?;
    let body = header
        .strip_prefix("instrument:")
        .ok_or_else(|| perr(1, "expected `instrument:` header"))?;
    let mut inputs = None;
    let mut outputs = None;
    for part in body.split_whitespace() {
        if let Some(v) = part.strip_prefix("inputs=") {
            inputs = Some(parse_wire_list(v, 1)?);
        } else if let Some(v) = part.strip_prefix("outputs=") {
            outputs = Some(parse_wire_list(v, 1)?);
        } else {
            return Err(perr(1, format!("unexpected `{part}`")));
        }
    }
    let inputs = inputs.unwrap_or_default();
    let outputs = outputs.unwrap_or_default();
    let mut outcomes = Vec::new();
    let mut at = 1;
    while at < lines.len() {
        if lines[at].is_empty() {
            at += 1;
            continue;
        }
        let k: usize = lines[at]
            .strip_prefix("outcome:")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| perr(at + 1, "expected `outcome: k`"))?;
        if k != outcomes.len() {
            return Err(perr(at + 1, format!("outcome {k} out of sequence")));
        }
        let (op, next) = read_operator(&lines, at + 1)?;
        outcomes.push(op);
        at = next;
    }
    Instrument::new(inputs, outputs, outcomes)
}
