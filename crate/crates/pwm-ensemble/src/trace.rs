//! Event-trace export and import for replay debugging.
//!
//! Line-delimited format: a JSON header line carrying the format tag and
//! version, then one JSON-encoded event per line. Any run can be re-executed
//! from its trace file, with the same or a different aggregator.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::environment::StreamEvent;
use crate::error::{Error, Result};

pub const TRACE_FORMAT: &str = "pwm-ensemble-trace";
pub const TRACE_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct TraceHeader {
    format: String,
    version: u32,
    learners: usize,
    slots: u64,
}

pub fn export_trace(path: &Path, events: &[StreamEvent]) -> Result<()> {
    if events.is_empty() {
        return Err(Error::InvalidArgument("refusing to export an empty trace".into()));
    }
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    let header = TraceHeader {
        format: TRACE_FORMAT.into(),
        version: TRACE_VERSION,
        learners: events[0].learners.len(),
        slots: events.len() as u64,
    };
    serde_json::to_writer(&mut file, &header).map_err(io_error)?;
    file.write_all(b"\n")?;
    for event in events {
        serde_json::to_writer(&mut file, event).map_err(io_error)?;
        file.write_all(b"\n")?;
    }
    file.flush()?;
    Ok(())
}

pub fn import_trace(path: &Path) -> Result<Vec<StreamEvent>> {
    let mut reader = BufReader::new(std::fs::File::open(path)?);
    let mut line = String::new();
    let mut offset = 0usize;

    reader.read_line(&mut line)?;
    let header: TraceHeader = serde_json::from_str(line.trim_end()).map_err(|e| Error::Parse {
        location: format!("{}, header (byte 0)", path.display()),
        message: e.to_string(),
    })?;
    if header.format != TRACE_FORMAT {
        return Err(Error::Parse {
            location: format!("{}, header", path.display()),
            message: format!("unknown format tag {:?}", header.format),
        });
    }
    if header.version != TRACE_VERSION {
        return Err(Error::Version {
            found: header.version,
            supported: TRACE_VERSION,
        });
    }
    offset += line.len();

    let mut events = Vec::with_capacity(header.slots as usize);
    loop {
        line.clear();
        if reader.read_line(&mut line)? == 0 {
            break;
        }
        if line.trim().is_empty() {
            offset += line.len();
            continue;
        }
        let event: StreamEvent = serde_json::from_str(line.trim_end()).map_err(|e| Error::Parse {
            location: format!(
                "{}, line {} (byte {offset})",
                path.display(),
                events.len() + 2
            ),
            message: e.to_string(),
        })?;
        events.push(event);
        offset += line.len();
    }
    if events.len() as u64 != header.slots {
        return Err(Error::Parse {
            location: format!("{}, byte {offset}", path.display()),
            message: format!(
                "truncated trace: header promises {} events, found {}",
                header.slots,
                events.len()
            ),
        });
    }
    Ok(events)
}

fn io_error(e: serde_json::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}
