import os
import json
from datetime import datetime

LOG_FILE_NAME = ".newsflow_log.json"

def get_log_file_path():
    """Ruta del historial: NEWSFLOW_LOG_FILE o el archivo de log en el directorio actual."""
    return os.environ.get("NEWSFLOW_LOG_FILE") or os.path.join(os.getcwd(), LOG_FILE_NAME)

def read_logs():
    log_file = get_log_file_path()
    if not os.path.exists(log_file):
        return []
    try:
        with open(log_file, 'r', encoding='utf-8') as f:
            return json.load(f)
    except json.JSONDecodeError:
        return [] # Si el archivo está corrupto, empezamos de nuevo

def log_operation(command, message, success=True):
    """Registra una operación en el archivo de log."""
    logs = read_logs()

    new_entry = {
        "timestamp": datetime.now().isoformat(),
        "command": command,
        "success": success,
        "message": message
    }

    logs.insert(0, new_entry)

    try:
        with open(get_log_file_path(), 'w', encoding='utf-8') as f:
            json.dump(logs, f, indent=4, ensure_ascii=False)
    except OSError:
        pass
