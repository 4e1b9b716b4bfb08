"""
Run log for experiment outputs
Records replication and sweep runs (config hash, seeds, timings) next to their results
"""

import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional, Union

import pandas as pd

logger = logging.getLogger(__name__)

RUN_LOG_FILE = "run_log.json"
MAX_EVENTS = 1000


def log_event(
    output_dir: Union[str, Path],
    event_type: str,
    action: str,
    details: Optional[Dict] = None
) -> Dict:
    """
    Append an event to the run log of an output directory

    Args:
        output_dir: Directory holding the run outputs
        event_type: Type of event (e.g., 'replicate', 'consistency')
        action: Description of the action
        details: Additional details (config hash, cell count, wall time)

    Returns:
        dict: The event as written
    """
    path = Path(output_dir) / RUN_LOG_FILE
    event = {
        'timestamp': datetime.now().isoformat(),
        'event_type': event_type,
        'action': action,
        'details': details or {},
    }

    log_data = _read(path)
    log_data.append(event)
    if len(log_data) > MAX_EVENTS:
        log_data = log_data[-MAX_EVENTS:]

    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(log_data, f, indent=2, ensure_ascii=False, default=str)
    except OSError as e:
        # a failed log write never fails the run
        logger.warning("Failed to write run log %s: %s", path, e)
    return event


def _read(path: Path) -> List[Dict]:
    if not path.exists():
        return []
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except (json.JSONDecodeError, OSError):
        logger.warning("Run log %s is unreadable; starting a new one", path)
        return []


def get_run_log(
    output_dir: Union[str, Path],
    event_type: Optional[str] = None,
    limit: Optional[int] = 100
) -> List[Dict]:
    """
    Retrieve run log entries, newest first

    Args:
        output_dir: Directory holding the run outputs
        event_type: Filter by event type (None = all)
        limit: Maximum number of entries to return
    """
    log_data = _read(Path(output_dir) / RUN_LOG_FILE)
    if event_type:
        log_data = [e for e in log_data if e.get('event_type') == event_type]
    log_data = sorted(log_data, key=lambda x: x.get('timestamp', ''), reverse=True)
    return log_data[:limit] if limit else log_data


def format_run_log_df(log_data: List[Dict]) -> pd.DataFrame:
    if not log_data:
        return pd.DataFrame(columns=['time', 'event_type', 'action', 'config_hash'])
    df = pd.DataFrame(log_data)
    return pd.DataFrame({
        'time': pd.to_datetime(df['timestamp']).dt.strftime('%Y-%m-%d %H:%M:%S'),
        'event_type': df['event_type'],
        'action': df['action'],
        'config_hash': [str(d.get('config_hash', ''))[:12] for d in df['details']],
    })
