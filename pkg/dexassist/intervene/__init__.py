from dexassist.intervene.correctionlog import CorrectionLog
from dexassist.intervene.correctionlog import CorrectionLogContent
from dexassist.intervene.correctionlog import export_correction_log
from dexassist.intervene.correctionlog import read_correction_log
from dexassist.intervene.correctionlog import record_step
from dexassist.intervene.discontinuity import measure_discontinuity
from dexassist.intervene.discontinuity import toggle_steps_from_times
from dexassist.intervene.fusion import FusedCommand
from dexassist.intervene.fusion import fuse_arm
from dexassist.intervene.fusion import fuse_hand
from dexassist.intervene.session import AnchorEvent
from dexassist.intervene.session import InterventionSession
from dexassist.intervene.session import StepResult
