# logging_config.py
import logging
import logging.handlers
import os
import sys
from datetime import datetime
from pathlib import Path
from typing import Optional

LOG_FORMAT = "%(asctime)s - %(name)s - [%(levelname)s] - %(message)s"


def _level_of(level_name: Optional[str]) -> int:
    return getattr(logging, (level_name or "INFO").upper(), logging.INFO)


class LoggingConfig:
    """
    ルートロガーにファイルと標準エラー出力のハンドラを1度だけ設定します。

    標準出力はコマンドの結果に使うため、ログは出しません。
    ログファイルは PASTEL_LOG_DIR（デフォルト logs）の app_YYYYMMDD.log です。
    """

    _initialized = False

    def __init__(self):
        if LoggingConfig._initialized:
            return
        self.log_dir = Path(os.environ.get("PASTEL_LOG_DIR", "logs"))
        self.log_level = _level_of(os.environ.get("LOG_LEVEL"))
        self.setup_logging()
        LoggingConfig._initialized = True

    def setup_logging(self) -> None:
        self.log_dir.mkdir(parents=True, exist_ok=True)
        log_file = self.log_dir / f"app_{datetime.now().strftime('%Y%m%d')}.log"
        file_handler = logging.handlers.TimedRotatingFileHandler(
            log_file, when="midnight", interval=1, backupCount=30, encoding="utf-8"
        )
        logging.basicConfig(
            level=self.log_level,
            format=LOG_FORMAT,
            handlers=[file_handler, logging.StreamHandler(sys.stderr)],
        )
        logging.getLogger(__name__).debug(f"ログの出力先: {log_file}（レベル {logging.getLevelName(self.log_level)}）")


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """
    名前付きロガーを取得します。

    Args:
        name (Optional[str]): ロガー名（通常は __name__）

    Returns:
        logging.Logger: 名前付きロガー
    """
    LoggingConfig()
    return logging.getLogger(name)


def set_log_level(level_name: str) -> int:
    """
    初期化後にログレベルを変更します。

    ライブラリのモジュールは import 時にロガーを作るため、CLI の
    --log-level はこの関数で反映します。

    Returns:
        int: 設定したレベル
    """
    LoggingConfig()
    level = _level_of(level_name)
    os.environ["LOG_LEVEL"] = logging.getLevelName(level)
    logging.getLogger().setLevel(level)
    return level
