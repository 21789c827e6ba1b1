import logging
import os

from config import Config

# --- Logging ---
if not os.path.exists(Config.LOG_DIR):
    os.makedirs(Config.LOG_DIR)

# Terminal output stays deterministic; the log file keeps INFO records for the fuzz dashboard.
console = logging.StreamHandler()
console.setLevel(logging.WARNING)

logging.basicConfig(level=logging.INFO,
                    format='%(asctime)s - %(levelname)s - %(message)s',
                    handlers=[
                        logging.FileHandler(Config.LOG_FILE),
                        console
                    ])

from cli import cli  # noqa: E402

if __name__ == "__main__":
    cli(prog_name="nomwyv")
