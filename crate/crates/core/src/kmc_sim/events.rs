//! Binary event-stream dump: little-endian `(time: f64, source: u32, dest: u32)` records.

use std::io::{self, Read, Write};

use crate::kmc_sim::dynamics::Event;

pub const RECORD_BYTES: usize = 16;

pub struct EventWriter<W: Write> {
    inner: W,
    written: u64,
}

impl<W: Write> EventWriter<W> {
    pub fn new(inner: W) -> Self {
        Self { inner, written: 0 }
    }

    pub fn write(&mut self, e: &Event) -> io::Result<()> {
        let mut buf = [0u8; RECORD_BYTES];
        buf[..8].copy_from_slice(&e.time.to_le_bytes());
        buf[8..12].copy_from_slice(&e.source.to_le_bytes());
        buf[12..].copy_from_slice(&e.dest.to_le_bytes());
        self.written += 1;
        self.inner.write_all(&buf)
    }

    pub fn written(&self) -> u64 {
        self.written
    }

    pub fn finish(mut self) -> io::Result<W> {
        self.inner.flush()?;
        Ok(self.inner)
    }
}

/// Read every record from `r`.
pub fn read_events<R: Read>(mut r: R) -> io::Result<Vec<Event>> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() % RECORD_BYTES != 0 {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            "truncated event record",
        ));
    }
    Ok(bytes
        .chunks_exact(RECORD_BYTES)
        .map(|c| Event {
            time: f64::from_le_bytes(c[..8].try_into().unwrap()),
            source: u32::from_le_bytes(c[8..12].try_into().unwrap()),
            dest: u32::from_le_bytes(c[12..].try_into().unwrap()),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let evs = vec![
            Event {
                time: 0.25,
                source: 1,
                dest: 2,
            },
            Event {
                time: 1e9,
                source: u32::MAX,
                dest: 0,
            },
        ];
        let mut w = EventWriter::new(Vec::new());
        for e in &evs {
            w.write(e).unwrap();
        }
        assert_eq!(w.written(), 2);
        let bytes = w.finish().unwrap();
        assert_eq!(bytes.len(), 32);
        assert_eq!(read_events(&bytes[..]).unwrap(), evs);
        assert!(read_events(&bytes[..20]).is_err());
    }
}
