use std::io;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

pub const DEFAULT_API_KEY_ENV: &str = "SCIDETECT_API_KEY";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("environment variable {0} is not set")]
    MissingApiKey(String),
    #[error("endpoint rejected the credentials (HTTP {0})")]
    AuthFailure(u16),
    #[error("rate limited after all retries")]
    RateLimited,
    #[error("request timed out after all retries")]
    Timeout,
    #[error("completion was empty")]
    EmptyCompletion,
    #[error("HTTP {status}: {body}")]
    Http { status: u16, body: String },
    #[error("transport: {0}")]
    Transport(String),
    #[error("unexpected response: {0}")]
    BadResponse(String),
    #[error("invalid client config: {0}")]
    BadConfig(String),
}

/// Settings for an OpenAI-style completions endpoint. The key is read from
/// the environment variable named by `api_key_env`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenClientConfig {
    pub endpoint_url: String,
    pub api_key_env: String,
    pub model_name: String,
    pub max_tokens: u32,
    pub temperature: f64,
    pub retry_limit: u32,
    pub timeout_secs: f64,
    /// First retry delay; doubles on every further attempt.
    pub backoff_base_ms: u64,
    pub max_in_flight: usize,
}

impl Default for GenClientConfig {
    fn default() -> Self {
        Self {
            endpoint_url: "https://api.openai.com/v1/completions".into(),
            api_key_env: DEFAULT_API_KEY_ENV.into(),
            model_name: "text-davinci-003".into(),
            max_tokens: 512,
            temperature: 1.0,
            retry_limit: 3,
            timeout_secs: 60.0,
            backoff_base_ms: 500,
            max_in_flight: 4,
        }
    }
}

impl GenClientConfig {
    pub fn validate(&self) -> Result<(), GenError> {
        if self.retry_limit > 10 {
            return Err(GenError::BadConfig("retry_limit must be at most 10".into()));
        }
        if !(self.timeout_secs > 0.0 && self.timeout_secs.is_finite()) {
            return Err(GenError::BadConfig("timeout must be positive".into()));
        }
        if self.max_tokens == 0 {
            return Err(GenError::BadConfig("max_tokens must be positive".into()));
        }
        if !(self.temperature >= 0.0) {
            return Err(GenError::BadConfig("temperature must be non-negative".into()));
        }
        if self.max_in_flight == 0 {
            return Err(GenError::BadConfig("max_in_flight must be positive".into()));
        }
        Ok(())
    }

    fn api_key(&self) -> Result<String, GenError> {
        std::env::var(&self.api_key_env)
            .ok()
            .filter(|k| !k.is_empty())
            .ok_or_else(|| GenError::MissingApiKey(self.api_key_env.clone()))
    }

    fn backoff(&self, attempt: u32) -> Duration {
        Duration::from_millis(self.backoff_base_ms.saturating_mul(1 << attempt.min(16)))
    }
}

fn is_timeout(err: &ureq::Transport) -> bool {
    let mut source = std::error::Error::source(err);
    while let Some(e) = source {
        if let Some(io) = e.downcast_ref::<io::Error>() {
            return matches!(io.kind(), io::ErrorKind::TimedOut | io::ErrorKind::WouldBlock);
        }
        source = e.source();
    }
    err.to_string().contains("timed out")
}

fn completion_text(body: &Value) -> Result<String, GenError> {
    let choice = body
        .get("choices")
        .and_then(|c| c.get(0))
        .ok_or_else(|| GenError::BadResponse("no choices".into()))?;
    let text = choice
        .get("text")
        .or_else(|| choice.get("message").and_then(|m| m.get("content")))
        .and_then(Value::as_str)
        .ok_or_else(|| GenError::BadResponse("choice has no text".into()))?;
    let text = text.trim();
    if text.is_empty() {
        return Err(GenError::EmptyCompletion);
    }
    Ok(text.to_string())
}

/// Sends one completion request, retrying timeouts, 429 and 5xx answers
/// with exponential backoff. Authentication failures are never retried.
pub fn generate_abstract(config: &GenClientConfig, prompt: &str) -> Result<String, GenError> {
    config.validate()?;
    let key = config.api_key()?;
    let agent = ureq::AgentBuilder::new()
        .timeout(Duration::from_secs_f64(config.timeout_secs))
        .build();
    let payload = json!({
        "model": config.model_name,
        "prompt": prompt,
        "max_tokens": config.max_tokens,
        "temperature": config.temperature,
    });

    let mut last = GenError::Timeout;
    for attempt in 0..=config.retry_limit {
        if attempt > 0 {
            thread::sleep(config.backoff(attempt - 1));
        }
        let result = agent
            .post(&config.endpoint_url)
            .set("Authorization", &format!("Bearer {key}"))
            .send_json(payload.clone());
        match result {
            Ok(resp) => {
                let body: Value = resp
                    .into_json()
                    .map_err(|e| GenError::BadResponse(e.to_string()))?;
                return completion_text(&body);
            }
            Err(ureq::Error::Status(code @ (401 | 403), _)) => {
                return Err(GenError::AuthFailure(code));
            }
            Err(ureq::Error::Status(429, _)) => last = GenError::RateLimited,
            Err(ureq::Error::Status(code, resp)) => {
                let body = resp.into_string().unwrap_or_default();
                let err = GenError::Http { status: code, body };
                if code < 500 {
                    return Err(err);
                }
                last = err;
            }
            Err(ureq::Error::Transport(t)) => {
                last = if is_timeout(&t) {
                    GenError::Timeout
                } else {
                    GenError::Transport(t.to_string())
                };
            }
        }
    }
    Err(last)
}

/// Runs [`generate_abstract`] over many prompts with at most
/// `max_in_flight` concurrent requests. Results line up with `prompts`.
pub fn generate_many(
    config: &GenClientConfig,
    prompts: &[String],
) -> Vec<Result<String, GenError>> {
    if let Err(e) = config.validate() {
        return prompts.iter().map(|_| Err(e.clone())).collect();
    }
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<String, GenError>>>> =
        Mutex::new(vec![None; prompts.len()]);
    let workers = config.max_in_flight.min(prompts.len());
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= prompts.len() {
                    break;
                }
                let r = generate_abstract(config, &prompts[i]);
                results.lock().expect("results lock")[i] = Some(r);
            });
        }
    });
    results
        .into_inner()
        .expect("results lock")
        .into_iter()
        .map(|r| r.expect("every prompt processed"))
        .collect()
}
