# The name of the entire application.
from pathlib import Path

import platformdirs


APP_NAME = 'QL_Perception'
# Local data dir for this application.
APP_DATA_DIR = Path(platformdirs.user_data_dir(APP_NAME))
# Where run/online results land when no explicit output path is given.
RESULTS_DIR = APP_DATA_DIR / 'results'
# Calibration datasheets shipped with the package.
CALIBRATIONS_DIR = Path(__file__).resolve().parent / 'measurement' / 'calibrations'
