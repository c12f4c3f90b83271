"""
Logging configuration for the color code toolkit
"""

import logging
import logging.handlers
import os
import time
from datetime import datetime

def setup_logging(log_level=logging.INFO, log_dir="logs", enable_file_logging=True):
    """
    Setup application logging

    Args:
        log_level: Logging level (default: INFO), int or level name
        log_dir: Directory for log files
        enable_file_logging: Write rotating log files in addition to the console
    """
    if isinstance(log_level, str):
        log_level = logging.getLevelName(log_level.upper())
        if not isinstance(log_level, int):
            log_level = logging.INFO

    # Configure root logger
    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)

    # Remove existing handlers
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    detailed_formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s'
    )

    simple_formatter = logging.Formatter(
        '%(asctime)s - %(levelname)s - %(message)s'
    )

    console_handler = logging.StreamHandler()
    console_handler.setLevel(log_level)
    console_handler.setFormatter(simple_formatter)
    root_logger.addHandler(console_handler)

    simulation_logger = logging.getLogger('simulation')
    simulation_logger.setLevel(logging.INFO)
    simulation_logger.propagate = False  # Don't propagate to root logger
    activity_logger = logging.getLogger('activity')
    activity_logger.setLevel(logging.INFO)
    activity_logger.propagate = False
    for named in (simulation_logger, activity_logger):
        for handler in named.handlers[:]:
            named.removeHandler(handler)

    if not enable_file_logging:
        simulation_logger.addHandler(logging.NullHandler())
        activity_logger.addHandler(logging.NullHandler())
        return

    os.makedirs(log_dir, exist_ok=True)

    # File handler for all logs
    all_logs_file = os.path.join(log_dir, "colormap.log")
    file_handler = logging.handlers.RotatingFileHandler(
        all_logs_file,
        maxBytes=10*1024*1024,  # 10MB
        backupCount=5,
        encoding='utf-8'
    )
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(detailed_formatter)
    root_logger.addHandler(file_handler)

    error_logs_file = os.path.join(log_dir, "errors.log")
    error_handler = logging.handlers.RotatingFileHandler(
        error_logs_file,
        maxBytes=5*1024*1024,  # 5MB
        backupCount=3,
        encoding='utf-8'
    )
    error_handler.setLevel(logging.ERROR)
    error_handler.setFormatter(detailed_formatter)
    root_logger.addHandler(error_handler)

    # Monte Carlo points (separate file per day)
    simulation_logs_file = os.path.join(log_dir, f"simulation_{datetime.now().strftime('%Y%m%d')}.log")
    simulation_handler = logging.handlers.RotatingFileHandler(
        simulation_logs_file,
        maxBytes=20*1024*1024,  # 20MB
        backupCount=10,
        encoding='utf-8'
    )
    simulation_handler.setFormatter(logging.Formatter('%(asctime)s - %(message)s'))
    simulation_logger.addHandler(simulation_handler)

    activity_logs_file = os.path.join(log_dir, "activity.log")
    activity_handler = logging.handlers.RotatingFileHandler(
        activity_logs_file,
        maxBytes=5*1024*1024,  # 5MB
        backupCount=5,
        encoding='utf-8'
    )
    activity_handler.setFormatter(simple_formatter)
    activity_logger.addHandler(activity_handler)

    logger = logging.getLogger(__name__)
    logger.debug("="*50)
    logger.debug("Color code toolkit started")
    logger.debug(f"Log level: {logging.getLevelName(log_level)}")
    logger.debug(f"Log directory: {os.path.abspath(log_dir)}")
    logger.debug("="*50)

def get_simulation_logger():
    """Get the Monte Carlo simulation logger"""
    return logging.getLogger('simulation')

def get_activity_logger():
    """Get the activity logger"""
    return logging.getLogger('activity')

def log_simulation_point(family, size, channel, rate, trials, failures, wall_time=None):
    """
    Log one finished Monte Carlo point

    Args:
        family: Lattice family
        size: Lattice size L
        channel: Channel name
        rate: Physical error rate
        trials: Number of trials
        failures: Number of logical failures
        wall_time: Seconds spent on the point (optional)
    """
    simulation_logger = get_simulation_logger()
    time_info = f" (took {wall_time:.2f}s)" if wall_time else ""
    ratio = failures / trials if trials else 0.0
    simulation_logger.info(
        f"POINT: {family} L={size} {channel} rate={rate:.5f} failures={failures}/{trials} ({ratio:.5f}){time_info}"
    )

def log_threshold_estimate(channel, estimate=None, uncertainty=None, error=None):
    """
    Log a threshold estimate or the reason none was found
    """
    simulation_logger = get_simulation_logger()

    if error:
        simulation_logger.error(f"THRESHOLD {channel}: FAILED - {error}")
    else:
        simulation_logger.info(f"THRESHOLD {channel}: {estimate:.5f} +/- {uncertainty:.5f}")

def log_check_result(check_name, target, success=True, details=None):
    """
    Log a map or circuit check

    Args:
        check_name: Name of the check (map-check, verify-circuit, ...)
        target: Lattice description
        success: Whether the check passed
        details: First violation if failed (optional)
    """
    activity_logger = get_activity_logger()

    status = "PASSED" if success else "FAILED"
    message = f"{check_name.upper()}: {target} - {status}"
    if details:
        message += f" - {details}"

    if success:
        activity_logger.info(message)
    else:
        activity_logger.error(message)

def log_decoder_inconsistency(target, details, replay=None):
    """
    Log a decoder inconsistency (defect outside erasure, nonzero residual syndrome)

    Args:
        target: Lattice description
        details: Error message
        replay: Trial coordinates for replay (optional)
    """
    activity_logger = get_activity_logger()

    message = f"DECODER: {target} - {details}"
    if replay:
        message += f" - replay {replay}"

    activity_logger.warning(message)

def cleanup_old_logs(log_dir="logs", days_to_keep=30):
    """
    Clean up old log files

    Args:
        log_dir: Directory with log files
        days_to_keep: Number of days of logs to keep

    Returns:
        Number of removed files
    """
    if not os.path.exists(log_dir):
        return 0

    cutoff_time = time.time() - (days_to_keep * 24 * 60 * 60)
    removed_count = 0

    logger = logging.getLogger(__name__)

    try:
        for filename in os.listdir(log_dir):
            if '.log' in filename:
                filepath = os.path.join(log_dir, filename)
                if os.path.getmtime(filepath) < cutoff_time:
                    os.remove(filepath)
                    removed_count += 1
                    logger.info(f"Removed old log file: {filename}")

        if removed_count > 0:
            logger.info(f"Cleaned up {removed_count} old log files")

    except OSError as e:
        logger.error(f"Failed to cleanup old logs: {e}")

    return removed_count
