# Charge Qubit Gate Control Toolkit
