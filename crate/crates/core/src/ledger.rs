//! Orbit ledger and probe journal for adjacency-decomposition campaigns.
//!
//! The ledger is a set of canonical rays. New entries go to an in-memory hash
//! set; when it grows past a threshold it is written out as a sorted binary
//! run and cleared. Membership checks consult the hash set, then binary-search
//! each run on disk.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::int::{self, Int};
use crate::io::{self as fmt_io, BINARY_HEADER_LEN};
use crate::ray::Ray;

#[derive(Debug)]
struct Run {
    path: PathBuf,
    file: File,
    count: u64,
    dim: usize,
}

impl Run {
    fn record(&self, k: u64, buf: &mut [u8]) -> Result<Vec<i64>> {
        let mut f = &self.file;
        f.seek(SeekFrom::Start(BINARY_HEADER_LEN + k * (self.dim as u64) * 8))?;
        f.read_exact(buf)?;
        Ok(buf.chunks_exact(8).map(fmt_io::decode_le).collect())
    }

    fn contains(&self, key: &[i64]) -> Result<bool> {
        let mut buf = vec![0u8; self.dim * 8];
        let (mut lo, mut hi) = (0u64, self.count);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            match self.record(mid, &mut buf)?.as_slice().cmp(key) {
                std::cmp::Ordering::Equal => return Ok(true),
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
            }
        }
        Ok(false)
    }
}

#[derive(Debug)]
pub struct OrbitLedger<N> {
    dim: usize,
    front: HashSet<Ray<N>>,
    runs: Vec<Run>,
    spill_dir: Option<PathBuf>,
    spill_at: usize,
    len: usize,
}

impl<N: Int> OrbitLedger<N> {
    /// A purely in-memory ledger.
    pub fn in_memory(dim: usize) -> Self {
        OrbitLedger {
            dim,
            front: HashSet::new(),
            runs: Vec::new(),
            spill_dir: None,
            spill_at: usize::MAX,
            len: 0,
        }
    }

    /// A ledger that spills to `dir` whenever the in-memory part reaches
    /// `spill_at` entries.
    pub fn spilling(dim: usize, dir: impl Into<PathBuf>, spill_at: usize) -> Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(OrbitLedger {
            spill_dir: Some(dir),
            spill_at: spill_at.max(1),
            ..Self::in_memory(dim)
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn runs(&self) -> usize {
        self.runs.len()
    }

    pub fn contains(&self, ray: &Ray<N>) -> Result<bool> {
        if self.front.contains(ray) {
            return Ok(true);
        }
        if self.runs.is_empty() {
            return Ok(false);
        }
        let key = int::to_i64_vec(ray.coords())?;
        for run in &self.runs {
            if run.contains(&key)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Inserts `ray`; returns `true` if it was not present.
    pub fn insert(&mut self, ray: Ray<N>) -> Result<bool> {
        if ray.dim() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: ray.dim(),
            });
        }
        if self.contains(&ray)? {
            return Ok(false);
        }
        self.front.insert(ray);
        self.len += 1;
        if self.front.len() >= self.spill_at {
            self.spill()?;
        }
        Ok(true)
    }

    /// Writes the in-memory part to a new sorted run.
    pub fn spill(&mut self) -> Result<()> {
        let Some(dir) = &self.spill_dir else {
            return Ok(());
        };
        if self.front.is_empty() {
            return Ok(());
        }
        let mut rays: Vec<Ray<N>> = self.front.drain().collect();
        rays.sort_unstable();
        let path = dir.join(format!("run-{:05}.sddr", self.runs.len()));
        let mut w = BufWriter::new(File::create(&path)?);
        fmt_io::write_binary_rays(&rays, self.dim, &mut w)?;
        w.flush()?;
        drop(w);
        self.runs.push(Run {
            file: File::open(&path)?,
            path,
            count: rays.len() as u64,
            dim: self.dim,
        });
        Ok(())
    }

    /// Every entry in ascending order (reads all runs into memory).
    pub fn sorted(&self) -> Result<Vec<Ray<N>>> {
        let mut all: Vec<Ray<N>> = self.front.iter().cloned().collect();
        for run in &self.runs {
            all.extend(fmt_io::read_binary_rays::<_, N>(BufReader::new(File::open(&run.path)?))?);
        }
        all.sort_unstable();
        Ok(all)
    }
}

/// One probe of an orbit representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JournalEntry<N> {
    pub canonical: Ray<N>,
    pub weight: usize,
    pub neighbors: usize,
    pub new_orbits: usize,
}

impl<N: Int> JournalEntry<N> {
    pub fn to_line(&self) -> String {
        format!("{} | {} | {} | {}", self.canonical, self.weight, self.neighbors, self.new_orbits)
    }

    pub fn parse(line_no: usize, line: &str) -> Result<Self> {
        let parts: Vec<&str> = line.split('|').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::malformed(line_no, "expected 4 `|`-separated fields"));
        }
        let coords = parts[0]
            .split_whitespace()
            .map(|t| t.parse::<N>().map_err(|_| Error::malformed(line_no, format!("not an integer: `{t}`"))))
            .collect::<Result<Vec<N>>>()?;
        let num = |s: &str| s.parse::<usize>().map_err(|_| Error::malformed(line_no, format!("not a count: `{s}`")));
        Ok(JournalEntry {
            canonical: Ray::new(coords).map_err(|e| Error::malformed(line_no, e.to_string()))?,
            weight: num(parts[1])?,
            neighbors: num(parts[2])?,
            new_orbits: num(parts[3])?,
        })
    }
}

/// Append-only probe log; reopening an existing journal resumes it.
#[derive(Debug)]
pub struct ProbeJournal {
    file: BufWriter<File>,
}

impl ProbeJournal {
    pub fn open(path: &Path) -> Result<Self> {
        let file = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
        Ok(ProbeJournal {
            file: BufWriter::new(file),
        })
    }

    pub fn append<N: Int>(&mut self, entry: &JournalEntry<N>) -> Result<()> {
        writeln!(self.file, "{}", entry.to_line())?;
        self.file.flush()?;
        Ok(())
    }

    pub fn read<N: Int>(path: &Path) -> Result<Vec<JournalEntry<N>>> {
        let r = BufReader::new(File::open(path)?);
        let mut out = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            out.push(JournalEntry::parse(i + 1, &line)?);
        }
        Ok(out)
    }
}
