# Belief change services
