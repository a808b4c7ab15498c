//! `FILE *` emulation over OS file handles.

use std::fmt;
use std::fs::OpenOptions;
use std::io::{Read, Seek, SeekFrom, Write};
use std::sync::{Arc, Mutex};

/// A nullable C file handle. Failed opens yield the null handle, matching
/// `fopen` returning `NULL`.
pub struct FilePtr {
    inner: Option<Arc<Mutex<std::fs::File>>>,
}

impl FilePtr {
    pub fn null() -> Self {
        FilePtr { inner: None }
    }

    pub fn is_null(&self) -> bool {
        self.inner.is_none()
    }

    pub fn open(path: &str, mode: &str) -> FilePtr {
        let mut opts = OpenOptions::new();
        let m = mode.trim_end_matches('b').trim_start_matches('b');
        match m {
            "r" => opts.read(true),
            "r+" => opts.read(true).write(true),
            "w" => opts.write(true).create(true).truncate(true),
            "w+" => opts.read(true).write(true).create(true).truncate(true),
            "a" => opts.append(true).create(true),
            "a+" => opts.read(true).append(true).create(true),
            _ => return FilePtr::null(),
        };
        match opts.open(path) {
            Ok(f) => FilePtr {
                inner: Some(Arc::new(Mutex::new(f))),
            },
            Err(_) => FilePtr::null(),
        }
    }

    /// `fread`: reads up to `size * nmemb` bytes into `buf`, returning the
    /// number of complete items read.
    pub fn read_items<T>(&self, buf: &super::ptr::Ptr<T>, size: usize, nmemb: usize) -> usize {
        let f = match &self.inner {
            Some(f) => f,
            None => panic!("runtime trap: fread on null FILE handle"),
        };
        let mut tmp = vec![0u8; size * nmemb];
        let mut got = 0usize;
        let mut file = f.lock().unwrap_or_else(|e| e.into_inner());
        while got < tmp.len() {
            match file.read(&mut tmp[got..]) {
                Ok(0) => break,
                Ok(n) => got += n,
                Err(_) => break,
            }
        }
        drop(file);
        if got > 0 {
            buf.byte_offset(0).write_bytes(&tmp[..got]);
        }
        if size == 0 {
            0
        } else {
            got / size
        }
    }

    /// `fwrite`: writes `size * nmemb` bytes from `buf`, returning the
    /// number of complete items written.
    pub fn write_items<T>(&self, buf: &super::ptr::Ptr<T>, size: usize, nmemb: usize) -> usize {
        let f = match &self.inner {
            Some(f) => f,
            None => panic!("runtime trap: fwrite on null FILE handle"),
        };
        let data = buf.read_bytes(size * nmemb);
        let mut file = f.lock().unwrap_or_else(|e| e.into_inner());
        match file.write_all(&data) {
            Ok(()) => nmemb,
            Err(_) => 0,
        }
    }

    pub fn write_str(&self, s: &str) -> i32 {
        let f = match &self.inner {
            Some(f) => f,
            None => return -1,
        };
        let mut file = f.lock().unwrap_or_else(|e| e.into_inner());
        match file.write_all(s.as_bytes()) {
            Ok(()) => s.len() as i32,
            Err(_) => -1,
        }
    }

    pub fn seek_to(&self, pos: u64) -> i32 {
        let f = match &self.inner {
            Some(f) => f,
            None => return -1,
        };
        let mut file = f.lock().unwrap_or_else(|e| e.into_inner());
        match file.seek(SeekFrom::Start(pos)) {
            Ok(_) => 0,
            Err(_) => -1,
        }
    }

    /// `fclose`: drops the handle; 0 on success, EOF (-1) on null.
    pub fn close(&mut self) -> i32 {
        match self.inner.take() {
            Some(f) => {
                let _ = f.lock().map(|mut h| h.flush());
                0
            }
            None => -1,
        }
    }
}

impl Clone for FilePtr {
    fn clone(&self) -> Self {
        FilePtr {
            inner: self.inner.clone(),
        }
    }
}

impl Default for FilePtr {
    fn default() -> Self {
        FilePtr::null()
    }
}

impl fmt::Debug for FilePtr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FilePtr({})",
            if self.inner.is_some() { "open" } else { "null" }
        )
    }
}
